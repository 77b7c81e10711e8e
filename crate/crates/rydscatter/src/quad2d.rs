//! Adaptive Gauss-Legendre quadrature in one and two dimensions.
//!
//! The overlap integrands are smooth except along a small set of known
//! lines: the axis-aligned kinks of the exponential coupling profiles and,
//! for the `sin|x - y|` kernels, the diagonal `x = y`. Axis-aligned kinks
//! are handled by initial split points; cells crossed by the diagonal are
//! integrated piecewise with y-limits that follow the diagonal, so every
//! rule evaluation sees an analytic integrand. Error control is global:
//! cells are refined worst-first until the summed two-rule disagreement
//! drops under the requested absolute tolerance.

use crate::error::{Error, Result};

/// Options for [`adaptive_quad_2d`].
#[derive(Debug, Clone)]
pub struct Quad2dOptions {
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Refinement budget; exceeding it reports the achieved tolerance.
    pub max_cells: usize,
    /// Integrand has a derivative kink along `x = y`.
    pub split_diagonal: bool,
    /// Interior x-values to cut the initial grid at (axis-aligned kinks).
    pub x_splits: Vec<f64>,
    /// Interior y-values to cut the initial grid at.
    pub y_splits: Vec<f64>,
}

impl Default for Quad2dOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            max_cells: 40_000,
            split_diagonal: false,
            x_splits: Vec::new(),
            y_splits: Vec::new(),
        }
    }
}

/// Converged value plus the final error estimate and cell count.
#[derive(Debug, Clone, Copy)]
pub struct QuadEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub cells: usize,
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        nodes[k] = x;
        weights[k] = 2.0 / ((1.0 - x * x) * d * d);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, d)
}

struct Rules {
    low_nodes: Vec<f64>,
    low_weights: Vec<f64>,
    high_nodes: Vec<f64>,
    high_weights: Vec<f64>,
}

impl Rules {
    fn new() -> Self {
        let (low_nodes, low_weights) = gauss_legendre(7);
        let (high_nodes, high_weights) = gauss_legendre(15);
        Self {
            low_nodes,
            low_weights,
            high_nodes,
            high_weights,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: f64,
    error: f64,
    seq: usize,
}

/// Iterated Gauss-Legendre over a region with linear-in-x y-limits.
fn mapped_rule<F>(
    f: &F,
    nodes: &[f64],
    weights: &[f64],
    xa: f64,
    xb: f64,
    ya: impl Fn(f64) -> f64,
    yb: impl Fn(f64) -> f64,
) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    if xb <= xa {
        return 0.0;
    }
    let hx = 0.5 * (xb - xa);
    let cx = 0.5 * (xb + xa);
    let mut total = 0.0;
    for (xi, wx) in nodes.iter().zip(weights) {
        let x = cx + hx * xi;
        let (lo, hi) = (ya(x), yb(x));
        if hi <= lo {
            continue;
        }
        let hy = 0.5 * (hi - lo);
        let cy = 0.5 * (hi + lo);
        let mut inner = 0.0;
        for (yi, wy) in nodes.iter().zip(weights) {
            inner += wy * f(x, cy + hy * yi);
        }
        total += wx * inner * hy;
    }
    total * hx
}

/// Integrate one cell with one rule, splitting along `x = y` when asked.
fn cell_rule<F>(f: &F, c: &Cell, nodes: &[f64], weights: &[f64], split_diag: bool) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let crosses = split_diag && c.x0 < c.y1 && c.y0 < c.x1;
    if !crosses {
        return mapped_rule(f, nodes, weights, c.x0, c.x1, |_| c.y0, |_| c.y1);
    }
    let xin = c.x0.max(c.y0);
    let xout = c.x1.min(c.y1);
    let mut total = 0.0;
    // Left strip: entirely above the diagonal (y > x).
    total += mapped_rule(f, nodes, weights, c.x0, xin, |_| c.y0, |_| c.y1);
    // Middle strip: pieces hug the diagonal from both sides.
    total += mapped_rule(f, nodes, weights, xin, xout, |_| c.y0, |x| x);
    total += mapped_rule(f, nodes, weights, xin, xout, |x| x, |_| c.y1);
    // Right strip: entirely below the diagonal (y < x).
    total += mapped_rule(f, nodes, weights, xout, c.x1, |_| c.y0, |_| c.y1);
    total
}

fn evaluate_cell<F>(f: &F, rules: &Rules, split_diag: bool, mut cell: Cell) -> Result<Cell>
where
    F: Fn(f64, f64) -> f64,
{
    let low = cell_rule(f, &cell, &rules.low_nodes, &rules.low_weights, split_diag);
    let high = cell_rule(f, &cell, &rules.high_nodes, &rules.high_weights, split_diag);
    if !high.is_finite() || !low.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite integrand over [{}, {}] x [{}, {}]",
            cell.x0, cell.x1, cell.y0, cell.y1
        )));
    }
    cell.value = high;
    cell.error = (high - low).abs();
    Ok(cell)
}

/// Adaptive 2-D quadrature of `f` over `[x0, x1] x [y0, y1]`.
pub fn adaptive_quad_2d<F>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    opts: &Quad2dOptions,
) -> Result<QuadEstimate>
where
    F: Fn(f64, f64) -> f64,
{
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::InvalidParameter(format!(
            "degenerate integration domain [{x0}, {x1}] x [{y0}, {y1}]"
        )));
    }
    let rules = Rules::new();
    let mut xs = vec![x0];
    xs.extend(opts.x_splits.iter().copied().filter(|&v| v > x0 && v < x1));
    xs.push(x1);
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ys = vec![y0];
    ys.extend(opts.y_splits.iter().copied().filter(|&v| v > y0 && v < y1));
    ys.push(y1);
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut seq = 0usize;
    let mut cells: Vec<Cell> = Vec::new();
    for xw in xs.windows(2) {
        for yw in ys.windows(2) {
            let cell = Cell {
                x0: xw[0],
                x1: xw[1],
                y0: yw[0],
                y1: yw[1],
                value: 0.0,
                error: 0.0,
                seq,
            };
            seq += 1;
            cells.push(evaluate_cell(&f, &rules, opts.split_diagonal, cell)?);
        }
    }

    loop {
        let total_error: f64 = cells.iter().map(|c| c.error).sum();
        if total_error <= opts.abs_tol {
            let value = cells.iter().map(|c| c.value).sum();
            return Ok(QuadEstimate {
                value,
                error_estimate: total_error,
                cells: cells.len(),
            });
        }
        if cells.len() + 3 > opts.max_cells {
            return Err(Error::QuadratureTolerance {
                requested: opts.abs_tol,
                achieved: total_error,
            });
        }
        // Worst cell first; sequence number breaks ties deterministically.
        let worst = cells
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.error
                    .partial_cmp(&b.error)
                    .unwrap()
                    .then(b.seq.cmp(&a.seq))
            })
            .map(|(i, _)| i)
            .unwrap();
        let c = cells.swap_remove(worst);
        let xm = 0.5 * (c.x0 + c.x1);
        let ym = 0.5 * (c.y0 + c.y1);
        for (nx0, nx1, ny0, ny1) in [
            (c.x0, xm, c.y0, ym),
            (xm, c.x1, c.y0, ym),
            (c.x0, xm, ym, c.y1),
            (xm, c.x1, ym, c.y1),
        ] {
            let cell = Cell {
                x0: nx0,
                x1: nx1,
                y0: ny0,
                y1: ny1,
                value: 0.0,
                error: 0.0,
                seq,
            };
            seq += 1;
            cells.push(evaluate_cell(&f, &rules, opts.split_diagonal, cell)?);
        }
    }
}

/// Adaptive 1-D quadrature with optional initial split points; used as an
/// independent reduction oracle in tests.
pub fn adaptive_quad_1d<F>(f: F, a: f64, b: f64, splits: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "degenerate integration interval [{a}, {b}]"
        )));
    }
    let (low_nodes, low_weights) = gauss_legendre(7);
    let (high_nodes, high_weights) = gauss_legendre(15);
    let rule = |xa: f64, xb: f64, nodes: &[f64], weights: &[f64]| -> f64 {
        let h = 0.5 * (xb - xa);
        let c = 0.5 * (xb + xa);
        nodes
            .iter()
            .zip(weights)
            .map(|(x, w)| w * f(c + h * x))
            .sum::<f64>()
            * h
    };
    let mut points = vec![a];
    points.extend(splits.iter().copied().filter(|&v| v > a && v < b));
    points.push(b);
    points.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new(); // (a, b, value, error)
    for w in points.windows(2) {
        let lo = rule(w[0], w[1], &low_nodes, &low_weights);
        let hi = rule(w[0], w[1], &high_nodes, &high_weights);
        intervals.push((w[0], w[1], hi, (hi - lo).abs()));
    }
    for _ in 0..100_000 {
        let total_error: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_error <= abs_tol {
            return Ok(intervals.iter().map(|iv| iv.2).sum());
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.3.partial_cmp(&y.3).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (ia, ib, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (ia + ib);
        for (na, nb) in [(ia, mid), (mid, ib)] {
            let lo = rule(na, nb, &low_nodes, &low_weights);
            let hi = rule(na, nb, &high_nodes, &high_weights);
            intervals.push((na, nb, hi, (hi - lo).abs()));
        }
    }
    Err(Error::QuadratureTolerance {
        requested: abs_tol,
        achieved: intervals.iter().map(|iv| iv.3).sum(),
    })
}
