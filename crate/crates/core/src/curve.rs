//! Curve definitions: the builtin catalog, parsed parametric expressions and
//! sampled data, all evaluated as per-coordinate jets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
use crate::jet::Jet;

/// Sampled curve on a uniform, strictly increasing grid.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    pub ts: Vec<f64>,
    /// One array per coordinate, each of the same length as `ts`.
    pub coords: Vec<Vec<f64>>,
}

impl SampleGrid {
    pub fn new(ts: Vec<f64>, coords: Vec<Vec<f64>>) -> Result<Self> {
        if ts.len() < 9 {
            return Err(Error::SampleGrid(format!(
                "need at least 9 points, got {}",
                ts.len()
            )));
        }
        if coords.is_empty() || coords.iter().any(|c| c.len() != ts.len()) {
            return Err(Error::SampleGrid(
                "coordinate arrays must match the grid length".into(),
            ));
        }
        let h = ts[1] - ts[0];
        if h <= 0.0 {
            return Err(Error::SampleGrid("grid must be strictly increasing".into()));
        }
        for w in ts.windows(2) {
            let step = w[1] - w[0];
            if step <= 0.0 || (step - h).abs() > 1e-6 * h.abs() {
                return Err(Error::SampleGrid(
                    "grid must be uniform and strictly increasing".into(),
                ));
            }
        }
        Ok(SampleGrid { ts, coords })
    }

    pub fn step(&self) -> f64 {
        self.ts[1] - self.ts[0]
    }

    /// Parse CSV text with header `t,x1,x2[,x3]`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::SampleGrid("empty CSV".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t")
            || cols.len() < 3
            || cols.len() > 4
            || !cols[1..]
                .iter()
                .enumerate()
                .all(|(i, c)| *c == format!("x{}", i + 1))
        {
            return Err(Error::SampleGrid(format!(
                "expected header `t,x1,x2[,x3]`, got `{header}`"
            )));
        }
        let dim = cols.len() - 1;
        let mut ts = Vec::new();
        let mut coords = vec![Vec::new(); dim];
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != dim + 1 {
                return Err(Error::SampleGrid(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 2,
                    dim + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::SampleGrid(format!("line {}: bad number `{s}`", lineno + 2))
                })
            };
            ts.push(parse(fields[0])?);
            for (i, f) in fields[1..].iter().enumerate() {
                coords[i].push(parse(f)?);
            }
        }
        SampleGrid::new(ts, coords)
    }

    pub fn to_csv(&self) -> String {
        let dim = self.coords.len();
        let mut out = String::from("t");
        for i in 1..=dim {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (j, t) in self.ts.iter().enumerate() {
            out.push_str(&crate::io::fmt_g17(*t));
            for c in &self.coords {
                out.push(',');
                out.push_str(&crate::io::fmt_g17(c[j]));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Builtin {
        name: String,
        params: Bindings,
    },
    Expressions {
        exprs: Vec<Expr>,
        params: Bindings,
    },
    Samples(SampleGrid),
}

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub dim: usize,
    pub source: Source,
    pub interval: (f64, f64),
    /// +1 for the given parameter direction, -1 after `reverse_orientation`.
    pub orientation: i8,
}

impl CurveSpec {
    pub fn from_exprs(exprs: Vec<Expr>, interval: (f64, f64)) -> Result<Self> {
        Self::from_exprs_with_params(exprs, Bindings::new(), interval)
    }

    pub fn from_exprs_with_params(
        exprs: Vec<Expr>,
        params: Bindings,
        interval: (f64, f64),
    ) -> Result<Self> {
        let dim = exprs.len();
        if dim != 2 && dim != 3 {
            return Err(Error::SampleGrid(format!(
                "curves live in dimension 2 or 3, got {dim} coordinates"
            )));
        }
        Ok(CurveSpec {
            dim,
            source: Source::Expressions { exprs, params },
            interval,
            orientation: 1,
        })
    }

    pub fn from_samples(grid: SampleGrid) -> Result<Self> {
        let dim = grid.coords.len();
        if dim != 2 && dim != 3 {
            return Err(Error::SampleGrid(format!(
                "curves live in dimension 2 or 3, got {dim} coordinates"
            )));
        }
        let interval = (grid.ts[0], *grid.ts.last().unwrap());
        Ok(CurveSpec {
            dim,
            source: Source::Samples(grid),
            interval,
            orientation: 1,
        })
    }

    /// Builtin catalog lookup with parameter overrides.
    pub fn builtin(name: &str, overrides: &Bindings) -> Result<Self> {
        let entry = builtin_entry(name)?;
        let mut params = entry.defaults.clone();
        for (k, v) in overrides {
            if !params.contains_key(k) {
                return Err(Error::UnboundSymbol(format!(
                    "builtin `{name}` has no parameter `{k}`"
                )));
            }
            params.insert(k.clone(), *v);
        }
        Ok(CurveSpec {
            dim: entry.exprs.len(),
            source: Source::Builtin {
                name: name.to_string(),
                params,
            },
            interval: entry.interval,
            orientation: 1,
        })
    }

    /// The parameter substitution u = -t: same trace, negated-and-swapped
    /// interval, flipped orientation.
    pub fn reverse_orientation(&self) -> CurveSpec {
        let mut out = self.clone();
        out.interval = (-self.interval.1, -self.interval.0);
        match &mut out.source {
            Source::Samples(grid) => {
                grid.ts = grid.ts.iter().rev().map(|t| -t).collect();
                for c in &mut grid.coords {
                    c.reverse();
                }
                // samples keep orientation +1: the substitution is applied to
                // the data itself
            }
            _ => out.orientation = -self.orientation,
        }
        out
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-9 * (1.0 + (self.interval.1 - self.interval.0).abs());
        t >= self.interval.0 - slack && t <= self.interval.1 + slack
    }

    /// Evaluate the curve at `t` as one jet of the requested order per
    /// coordinate.  Expression and builtin sources are exact to machine
    /// precision; sampled sources use centered 4th-order finite differences
    /// and refuse orders above 4.
    pub fn eval(&self, t: f64, order: usize) -> Result<Vec<Jet>> {
        if !self.contains(t) {
            return Err(Error::OutOfInterval {
                t,
                lo: self.interval.0,
                hi: self.interval.1,
            });
        }
        match &self.source {
            Source::Expressions { exprs, params } => {
                eval_exprs(exprs, params, self.orientation, t, order)
            }
            Source::Builtin { name, params } => {
                let entry = builtin_entry(name)?;
                eval_exprs(&entry.exprs, params, self.orientation, t, order)
            }
            Source::Samples(grid) => eval_samples(grid, t, order),
        }
    }

    pub fn resolved_exprs(&self) -> Option<(Vec<Expr>, Bindings)> {
        match &self.source {
            Source::Expressions { exprs, params } => Some((exprs.clone(), params.clone())),
            Source::Builtin { name, params } => builtin_entry(name)
                .ok()
                .map(|e| (e.exprs.clone(), params.clone())),
            Source::Samples(_) => None,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self.source, Source::Samples(_))
    }

    /// Uniform evaluation grid of n points over the interval.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.interval.0, self.interval.1, n)
    }
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * h).collect()
}

fn eval_exprs(
    exprs: &[Expr],
    params: &Bindings,
    orientation: i8,
    t: f64,
    order: usize,
) -> Result<Vec<Jet>> {
    // x(u) with u = orientation * t, as a jet in t
    let mut coeffs = vec![0.0; order.max(1) + 1];
    coeffs[0] = orientation as f64 * t;
    coeffs[1] = orientation as f64;
    let u = Jet::from_coeffs(coeffs);
    exprs
        .iter()
        .enumerate()
        .map(|(index, e)| {
            e.eval_jet(&u, params)
                .map(|j| j.truncated(order))
                .map_err(|source| Error::Coordinate {
                    index,
                    source: Box::new(source),
                })
        })
        .collect()
}

/// Centered finite-difference weights on a uniform grid, 4th-order accurate.
/// Rows are derivative orders 1..=4, offsets -3..=3.
const FD_WEIGHTS: [[f64; 7]; 4] = [
    [0.0, 1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0, 0.0],
    [
        0.0,
        -1.0 / 12.0,
        4.0 / 3.0,
        -5.0 / 2.0,
        4.0 / 3.0,
        -1.0 / 12.0,
        0.0,
    ],
    [
        1.0 / 8.0,
        -1.0,
        13.0 / 8.0,
        0.0,
        -13.0 / 8.0,
        1.0,
        -1.0 / 8.0,
    ],
    [
        -1.0 / 6.0,
        2.0,
        -13.0 / 2.0,
        28.0 / 3.0,
        -13.0 / 2.0,
        2.0,
        -1.0 / 6.0,
    ],
];

/// Locate the grid node for `t` and check the stencil reach for `order`.
pub(crate) fn sample_node(ts: &[f64], t: f64, order: usize) -> Result<usize> {
    if order > 4 {
        return Err(Error::SampledOrderLimit { requested: order });
    }
    let h = ts[1] - ts[0];
    let idx_f = (t - ts[0]) / h;
    let idx = idx_f.round() as isize;
    if (idx_f - idx as f64).abs() > 1e-6 {
        return Err(Error::SampleGrid(format!(
            "sampled data evaluates on grid nodes only; t = {t} is off-grid"
        )));
    }
    let n = ts.len() as isize;
    let reach = if order >= 3 {
        3
    } else if order >= 1 {
        2
    } else {
        0
    };
    if idx < reach || idx >= n - reach {
        return Err(Error::OutOfInterval {
            t,
            lo: ts[reach as usize],
            hi: ts[(n - 1 - reach) as usize],
        });
    }
    Ok(idx as usize)
}

/// Jet of tabulated values at node `idx`, derivatives by 4th-order centered
/// differences up to `order <= 4`.
pub(crate) fn fd_jet(values: &[f64], idx: usize, h: f64, order: usize) -> Jet {
    let mut coeffs = vec![0.0; order + 1];
    coeffs[0] = values[idx];
    let mut fact = 1.0;
    for m in 1..=order {
        fact *= m as f64;
        let mut acc = 0.0;
        for (o, w) in FD_WEIGHTS[m - 1].iter().enumerate() {
            if *w != 0.0 {
                acc += w * values[idx + o - 3];
            }
        }
        coeffs[m] = acc / (h.powi(m as i32) * fact);
    }
    Jet::from_coeffs(coeffs)
}

fn eval_samples(grid: &SampleGrid, t: f64, order: usize) -> Result<Vec<Jet>> {
    let idx = sample_node(&grid.ts, t, order)?;
    let h = grid.step();
    Ok(grid
        .coords
        .iter()
        .map(|values| fd_jet(values, idx, h, order))
        .collect())
}

struct BuiltinEntry {
    exprs: Vec<Expr>,
    defaults: Bindings,
    interval: (f64, f64),
}

fn entry(coords: &[&str], defaults: &[(&str, f64)], interval: (f64, f64)) -> BuiltinEntry {
    BuiltinEntry {
        exprs: coords
            .iter()
            .map(|s| Expr::parse(s).expect("builtin catalog expression"))
            .collect(),
        defaults: defaults
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect(),
        interval,
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    vec![
        "ellipse",
        "hyperbola",
        "log-spiral",
        "catenary",
        "rose",
        "parabola",
        "exp-graph",
        "tlogt",
        "power",
        "circular-helix",
        "hyperbolic-helix",
        "space-log-spiral",
        "exp-triple",
        "mk",
        "viviani",
        "torus-knot",
        "cubic-parabola",
        "const-row1",
        "const-row2",
        "const-row3",
        "const-row4",
        "const-row5",
        "const-row6",
        "const-row7",
        "equi1",
        "equi2",
        "equi3",
        "equi-mixed",
        "cv1",
        "cv2",
        "cv3",
        "cv4",
        "cv5",
        "cv6",
        "cv7",
        "cv8",
        "cv9",
    ]
}

fn builtin_entry(name: &str) -> Result<BuiltinEntry> {
    use std::f64::consts::PI;
    let e = match name {
        // plane
        "ellipse" => entry(
            &["a*cos(t)", "b*sin(t)"],
            &[("a", 1.0), ("b", 1.0)],
            (0.0, 2.0 * PI),
        ),
        "hyperbola" => entry(
            &["a*cosh(t)", "b*sinh(t)"],
            &[("a", 1.0), ("b", 1.0)],
            (-2.0, 2.0),
        ),
        "log-spiral" => entry(
            &["exp(gamma*t)*cos(alpha*t)", "exp(gamma*t)*sin(alpha*t)"],
            &[("gamma", 1.0), ("alpha", 1.0)],
            (0.0, 2.0 * PI),
        ),
        "catenary" => entry(&["t", "cosh(t)"], &[], (-2.5, 2.5)),
        "rose" => entry(
            &["cos(n*t)*cos(t)", "cos(n*t)*sin(t)"],
            &[("n", 1.0 / 3.0)],
            (0.0, 3.0 * PI),
        ),
        "parabola" => entry(&["t", "t^2/2"], &[], (-2.0, 2.0)),
        "exp-graph" => entry(&["t", "exp(t)"], &[], (-1.5, 1.5)),
        "tlogt" => entry(&["t", "t*log(t)"], &[], (0.2, 3.0)),
        "power" => entry(&["t", "t^alpha"], &[("alpha", 3.0)], (0.5, 2.0)),
        // space
        "circular-helix" => entry(&["t", "cos(t)", "sin(t)"], &[], (0.0, 2.0 * PI)),
        "hyperbolic-helix" => entry(&["t", "cosh(t)", "sinh(t)"], &[], (-2.0, 2.0)),
        "space-log-spiral" => entry(
            &[
                "exp(-2*lambda*t)",
                "exp(lambda*t)*cos(p*t)",
                "exp(lambda*t)*sin(p*t)",
            ],
            &[("lambda", 1.0), ("p", 2.0)],
            (0.0, PI),
        ),
        "exp-triple" => entry(
            &["exp(lambda*t)", "exp(mu*t)", "exp(nu*t)"],
            &[("lambda", 1.0), ("mu", 2.0), ("nu", 4.0)],
            (0.0, 1.0),
        ),
        "mk" => entry(
            &["t", "exp(lambda*t)", "t*exp(lambda*t)"],
            &[("lambda", 1.0)],
            (0.0, 1.0),
        ),
        "viviani" => entry(
            &["1+cos(2*t)", "sin(2*t)", "2*sin(t)"],
            &[],
            (0.0, 2.0 * PI),
        ),
        "torus-knot" => entry(
            &[
                "(4+cos(3*t))*cos(t)",
                "(4+cos(3*t))*sin(t)",
                "sin(3*t)",
            ],
            &[],
            (0.0, 2.0 * PI),
        ),
        "cubic-parabola" => entry(&["t", "t^2/2", "t^3/6"], &[], (-1.0, 1.0)),
        // constant-curvature space curves, one characteristic root pattern each
        "const-row1" => entry(
            &["t", "exp(lambda*t)", "exp(mu*t)"],
            &[("lambda", 1.0), ("mu", 2.0)],
            (0.0, 1.0),
        ),
        "const-row2" => entry(
            &["exp(t)", "t*exp(t)", "exp(lambda*t)"],
            &[("lambda", 3.0)],
            (0.0, 1.0),
        ),
        "const-row3" => entry(
            &["t", "t^2/2", "exp(lambda*t)"],
            &[("lambda", 1.0)],
            (0.0, 1.0),
        ),
        "const-row4" => entry(&["exp(t)", "t*exp(t)", "t^2*exp(t)"], &[], (0.0, 1.0)),
        "const-row5" => entry(
            &["t", "exp(t)*cos(p*t)", "exp(t)*sin(p*t)"],
            &[("p", 1.0)],
            (0.0, 1.0),
        ),
        "const-row6" => entry(
            &["exp(lambda*t)", "cosh(p*t)", "sinh(p*t)"],
            &[("lambda", 2.0), ("p", 1.0)],
            (0.0, 1.0),
        ),
        "const-row7" => entry(
            &[
                "exp(lambda*t)",
                "exp(mu*t)*cos(p*t)",
                "exp(mu*t)*sin(p*t)",
            ],
            &[("lambda", 1.0), ("mu", 2.0), ("p", 1.0)],
            (0.0, 1.0),
        ),
        // equiaffine-homogeneous curves (the remaining members of that list
        // are the helices and the cubic parabola above)
        "equi1" => entry(
            &["exp(lambda*t)", "exp(mu*t)", "exp(-(lambda+mu)*t)"],
            &[("lambda", 1.0), ("mu", 2.0)],
            (0.0, 1.0),
        ),
        "equi2" => entry(
            &["t*exp(lambda*t)", "exp(lambda*t)", "exp(-2*lambda*t)"],
            &[("lambda", 1.0)],
            (0.0, 1.0),
        ),
        "equi3" => entry(
            &[
                "exp(-2*alpha*t)",
                "exp(alpha*t)*cos(beta*t)",
                "exp(alpha*t)*sin(beta*t)",
            ],
            &[("alpha", 1.0), ("beta", 1.0)],
            (0.0, 1.0),
        ),
        "equi-mixed" => entry(
            &["exp(t)", "t*exp(t)", "exp(-2*t)"],
            &[],
            (0.0, 1.0),
        ),
        // anharmonic projective curves in the affine chart x_i / x_0
        "cv1" => entry(
            &[
                "exp((2*lambda+mu+nu)*t)",
                "exp((lambda+2*mu+nu)*t)",
                "exp((lambda+mu+2*nu)*t)",
            ],
            &[("lambda", 1.0), ("mu", 2.0), ("nu", 3.0)],
            (0.0, 0.5),
        ),
        "cv2" => entry(
            &["t", "exp((3*lambda+mu)*t)", "exp((lambda+3*mu)*t)"],
            &[("lambda", 1.0), ("mu", 2.0)],
            (0.0, 0.5),
        ),
        "cv3" => entry(
            &[
                "exp(2*(mu-lambda)*t)",
                "exp(-(3*lambda+mu)*t)*cos(p*t)",
                "exp(-(3*lambda+mu)*t)*sin(p*t)",
            ],
            &[("lambda", 1.0), ("mu", 2.0), ("p", 1.0)],
            (0.0, 0.5),
        ),
        "cv4" => entry(
            &[
                "tan(p*t)",
                "exp(-2*lambda*t)*cos(q*t)/cos(p*t)",
                "exp(-2*lambda*t)*sin(q*t)/cos(p*t)",
            ],
            &[("lambda", 1.0), ("p", 1.0), ("q", 2.0)],
            (-0.3, 0.3),
        ),
        "cv5" => entry(
            &[
                "tan(p*t)",
                "exp(-2*lambda*t)/cos(p*t)",
                "t*exp(-2*lambda*t)/cos(p*t)",
            ],
            &[("lambda", 1.0), ("p", 1.0)],
            (-0.3, 0.3),
        ),
        "cv6" => entry(
            &["t", "exp(-2*lambda*t)", "t*exp(-2*lambda*t)"],
            &[("lambda", 1.0)],
            (0.0, 1.0),
        ),
        "cv7" => entry(
            &["tan(p*t)", "t", "t*tan(p*t)"],
            &[("p", 1.0)],
            (0.1, 0.6),
        ),
        "cv8" => entry(
            &["t", "t^2", "exp(-4*lambda*t)"],
            &[("lambda", 1.0)],
            (0.0, 1.0),
        ),
        "cv9" => entry(&["t", "t^2", "t^3"], &[], (0.1, 1.0)),
        _ => {
            return Err(Error::UnboundSymbol(format!(
                "unknown builtin curve `{name}`"
            )))
        }
    };
    Ok(e)
}

/// Bindings helper for literal parameter lists.
pub fn bindings(pairs: &[(&str, f64)]) -> Bindings {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect::<BTreeMap<_, _>>()
}
