use crate::error::{Error, Result};

/// Piecewise-linear path starting at the origin, stored as its list of
/// segment increments. Zero increments are dropped on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PlPath {
    dim: usize,
    increments: Vec<Vec<f64>>,
}

impl PlPath {
    pub fn new(dim: usize, increments: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("path dimension must be >= 1".into()));
        }
        let mut kept = Vec::with_capacity(increments.len());
        for inc in increments {
            if inc.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: inc.len(),
                });
            }
            if inc.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite path increment".into()));
            }
            if inc.iter().any(|&x| x != 0.0) {
                kept.push(inc);
            }
        }
        Ok(PlPath { dim, increments: kept })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// Path through the given points; the first point is the start, and the
    /// path is translated so that it starts at the origin.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidArgument("no points".into()));
        };
        let incs = points
            .windows(2)
            .map(|p| p[1].iter().zip(&p[0]).map(|(b, a)| b - a).collect())
            .collect();
        Self::new(first.len(), incs)
    }

    /// Closed regular polygon with `sides` vertices on the circle of radius
    /// `radius`, traversed counterclockwise from `(radius, 0)`.
    pub fn regular_polygon(radius: f64, sides: usize) -> Result<Self> {
        let pts: Vec<Vec<f64>> = (0..=sides)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k % sides) as f64 / sides as f64;
                vec![radius * t.cos(), radius * t.sin()]
            })
            .collect();
        Self::from_points(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn increments(&self) -> &[Vec<f64>] {
        &self.increments
    }

    pub fn segments(&self) -> usize {
        self.increments.len()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &PlPath) -> Result<PlPath> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut incs = self.increments.clone();
        incs.extend(other.increments.iter().cloned());
        Ok(PlPath {
            dim: self.dim,
            increments: incs,
        })
    }

    /// Same trace in the opposite direction.
    pub fn invert(&self) -> PlPath {
        PlPath {
            dim: self.dim,
            increments: self
                .increments
                .iter()
                .rev()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn endpoint(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim];
        for inc in &self.increments {
            for (a, b) in e.iter_mut().zip(inc) {
                *a += b;
            }
        }
        e
    }

    /// Splits every segment into `k` equal collinear pieces (a reparametrization).
    pub fn subdivide(&self, k: usize) -> PlPath {
        let k = k.max(1);
        let incs = self
            .increments
            .iter()
            .flat_map(|v| {
                let piece: Vec<f64> = v.iter().map(|x| x / k as f64).collect();
                std::iter::repeat_n(piece, k)
            })
            .collect();
        PlPath {
            dim: self.dim,
            increments: incs,
        }
    }

    /// Parses one path: semicolon-separated increments with comma-separated
    /// components, e.g. `"0.5,0; 0,1.25"`. An empty line is the empty path
    /// of dimension `dim_hint`.
    pub fn parse(line: &str, dim_hint: Option<usize>) -> Result<PlPath> {
        let line = line.trim();
        if line.is_empty() {
            return match dim_hint {
                Some(d) => PlPath::empty(d),
                None => Err(Error::parse(1, "empty path without a dimension")),
            };
        }
        let mut incs = Vec::new();
        for seg in line.split(';') {
            let comps = seg
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::parse(1, format!("bad number {:?}", t.trim())))
                })
                .collect::<Result<Vec<f64>>>()?;
            incs.push(comps);
        }
        let dim = dim_hint.unwrap_or(incs[0].len());
        PlPath::new(dim, incs).map_err(|e| Error::parse(1, e.to_string()))
    }

    /// One path per non-blank, non-`#` line; all paths share the first path's dimension.
    pub fn parse_file(text: &str) -> Result<Vec<PlPath>> {
        let mut out: Vec<PlPath> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let hint = out.first().map(|p| p.dim);
            let p = PlPath::parse(line, hint).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::parse(idx + 1, msg),
                other => other,
            })?;
            out.push(p);
        }
        Ok(out)
    }

    pub fn to_line(&self) -> String {
        self.increments
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("; ")
    }
}
