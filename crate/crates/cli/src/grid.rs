//! Grids of t-vectors.
//!
//! `axis:<coord>:<start>:<stop>:<count>` varies coordinate `coord` (1-based)
//! over a linspace with the others at 0. `ray:<d1,..,dn>:<start>:<stop>:<count>`
//! walks the unit direction d. `list:<v1>;<v2>;...` gives explicit vectors with
//! comma-separated coordinates.

use nalgebra::DVector;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Axis {
        coord: usize,
        start: f64,
        stop: f64,
        count: usize,
    },
    Ray {
        direction: Vec<f64>,
        start: f64,
        stop: f64,
        count: usize,
    },
    List(Vec<Vec<f64>>),
}

fn bad(detail: impl std::fmt::Display) -> CliError {
    CliError::Spec(format!("--grid: {detail}"))
}

fn num(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| bad(format!("`{s}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("`{s}` is not finite")))
    }
}

fn vector(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(num).collect()
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect()
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("`{s}` has no `kind:` prefix")))?;
        let range = |parts: &[&str]| -> Result<(f64, f64, usize), CliError> {
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| bad(format!("count `{}` is not an integer", parts[2])))?;
            if count == 0 {
                return Err(bad("count must be >= 1"));
            }
            Ok((num(parts[0])?, num(parts[1])?, count))
        };
        match kind {
            "axis" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 4 {
                    return Err(bad("axis needs <coord>:<start>:<stop>:<count>"));
                }
                let coord: usize = parts[0]
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("coordinate `{}`", parts[0])))?;
                if coord == 0 {
                    return Err(bad("coordinates are 1-based"));
                }
                let (start, stop, count) = range(&parts[1..])?;
                Ok(Grid::Axis {
                    coord,
                    start,
                    stop,
                    count,
                })
            }
            "ray" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 4 {
                    return Err(bad("ray needs <d1,..,dn>:<start>:<stop>:<count>"));
                }
                let direction = vector(parts[0])?;
                if direction.iter().all(|d| *d == 0.0) {
                    return Err(bad("ray direction is zero"));
                }
                let (start, stop, count) = range(&parts[1..])?;
                Ok(Grid::Ray {
                    direction,
                    start,
                    stop,
                    count,
                })
            }
            "list" => {
                let points = rest
                    .split(';')
                    .filter(|p| !p.trim().is_empty())
                    .map(vector)
                    .collect::<Result<Vec<_>, _>>()?;
                if points.is_empty() {
                    return Err(bad("empty list"));
                }
                Ok(Grid::List(points))
            }
            other => Err(bad(format!("unknown grid kind `{other}` (axis, ray or list)"))),
        }
    }

    /// The grid's t-vectors in ℝⁿ.
    pub fn points(&self, n: usize) -> Result<Vec<DVector<f64>>, CliError> {
        match self {
            Grid::Axis {
                coord,
                start,
                stop,
                count,
            } => {
                if *coord > n {
                    return Err(bad(format!("coordinate {coord} exceeds dimension {n}")));
                }
                Ok(linspace(*start, *stop, *count)
                    .into_iter()
                    .map(|v| {
                        let mut t = DVector::zeros(n);
                        t[coord - 1] = v;
                        t
                    })
                    .collect())
            }
            Grid::Ray {
                direction,
                start,
                stop,
                count,
            } => {
                if direction.len() != n {
                    return Err(bad(format!(
                        "direction has {} coordinates, dimension is {n}",
                        direction.len()
                    )));
                }
                let d = DVector::from_column_slice(direction).normalize();
                Ok(linspace(*start, *stop, *count).into_iter().map(|r| &d * r).collect())
            }
            Grid::List(points) => points
                .iter()
                .map(|p| {
                    if p.len() == n {
                        Ok(DVector::from_column_slice(p))
                    } else {
                        Err(bad(format!(
                            "point {p:?} has {} coordinates, dimension is {n}",
                            p.len()
                        )))
                    }
                })
                .collect(),
        }
    }
}
