//! Exact piecewise-linear and step functions on an interval.
//!
//! All isoperimetric profiles in this crate are either piecewise linear in
//! the continuized set size `t` or step functions of a threshold `u`; every
//! integral of them used anywhere is evaluated segment by segment in closed
//! form, so no quadrature error enters any reported quantity.

use crate::error::{Error, Result};

/// A continuous piecewise-linear function given by its breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    /// Breakpoints must be strictly increasing and at least two.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::BadParam(format!(
                "piecewise-linear needs matching breakpoint/value lists of length >= 2, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParam(
                "piecewise-linear breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewiseLinear { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Evaluation by linear interpolation; exact at breakpoints.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::DomainError(format!(
                "evaluation point {x} outside [{lo}, {hi}]"
            )));
        }
        let i = match self.xs.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => return Ok(self.ys[i]),
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Exact integral over `[lo, hi]` (trapezoid rule per segment is exact
    /// for a piecewise-linear integrand).
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        let (a, b) = self.domain();
        if !(lo >= a && hi <= b && lo <= hi) {
            return Err(Error::DomainError(format!(
                "integration range [{lo}, {hi}] outside [{a}, {b}]"
            )));
        }
        let mut total = 0.0;
        for i in 0..self.xs.len() - 1 {
            let s = self.xs[i].max(lo);
            let e = self.xs[i + 1].min(hi);
            if s >= e {
                continue;
            }
            let ys = self.eval_on_segment(i, s);
            let ye = self.eval_on_segment(i, e);
            total += 0.5 * (ys + ye) * (e - s);
        }
        Ok(total)
    }

    fn eval_on_segment(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        if x == x0 {
            y0
        } else if x == x1 {
            y1
        } else {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }

    /// A copy with `x` inserted as a breakpoint (interpolated value); no-op
    /// when `x` already is one.
    pub fn with_breakpoint(&self, x: f64) -> Result<PiecewiseLinear> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::DomainError(format!(
                "breakpoint {x} outside [{lo}, {hi}]"
            )));
        }
        match self.xs.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(_) => Ok(self.clone()),
            Err(i) => {
                let y = self.eval(x)?;
                let mut xs = self.xs.clone();
                let mut ys = self.ys.clone();
                xs.insert(i, x);
                ys.insert(i, y);
                PiecewiseLinear::new(xs, ys)
            }
        }
    }

    /// Segments as `(x0, x1, y0, y1)` tuples.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.xs.len() - 1).map(|i| (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]))
    }

    /// True when slopes are non-decreasing on `[lo, hi]` up to `tol`.
    pub fn is_convex_on(&self, lo: f64, hi: f64, tol: f64) -> bool {
        let mut prev: Option<f64> = None;
        for (x0, x1, y0, y1) in self.segments() {
            if x1 <= lo || x0 >= hi {
                continue;
            }
            let slope = (y1 - y0) / (x1 - x0);
            if let Some(p) = prev {
                if slope < p - tol {
                    return false;
                }
            }
            prev = Some(slope);
        }
        true
    }
}

/// A right-continuous step function: value `vs[i]` on `[xs[i], xs[i+1])`
/// and `vs.last()` on `[xs.last(), end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    xs: Vec<f64>,
    vs: Vec<f64>,
    end: f64,
}

impl StepFunction {
    pub fn new(xs: Vec<f64>, vs: Vec<f64>, end: f64) -> Result<Self> {
        if xs.is_empty() || xs.len() != vs.len() {
            return Err(Error::BadParam(format!(
                "step function needs matching nonempty breakpoint/value lists, got {} and {}",
                xs.len(),
                vs.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParam(
                "step-function breakpoints must be strictly increasing".into(),
            ));
        }
        if !(end >= *xs.last().unwrap()) {
            return Err(Error::BadParam(format!(
                "step-function end {end} before last breakpoint"
            )));
        }
        Ok(StepFunction { xs, vs, end })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.vs
    }

    pub fn start(&self) -> f64 {
        self.xs[0]
    }

    /// The same function with the first piece stretched down to `x0` when
    /// `x0` lies before the current start; otherwise an unchanged clone.
    pub fn extended_down(&self, x0: f64) -> StepFunction {
        let mut out = self.clone();
        if x0 < out.xs[0] {
            out.xs[0] = x0;
        }
        out
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Value of the piece containing `x`; `x` past the end clamps to the
    /// last piece.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= self.xs[0]) {
            return Err(Error::DomainError(format!(
                "evaluation point {x} before step-function start {}",
                self.xs[0]
            )));
        }
        let i = match self.xs.binary_search_by(|b| b.total_cmp(&x)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(self.vs[i])
    }

    /// Pieces as `(from, to, value)` with `to` exclusive except at the end.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.xs.len()).map(|i| {
            let to = if i + 1 < self.xs.len() {
                self.xs[i + 1]
            } else {
                self.end
            };
            (self.xs[i], to, self.vs[i])
        })
    }

    /// Exact `\int_lo^hi value(x) dx`.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check_range(lo, hi)?;
        let mut total = 0.0;
        for (a, b, v) in self.pieces() {
            let s = a.max(lo);
            let e = b.min(hi);
            if s < e {
                total += v * (e - s);
            }
        }
        Ok(total)
    }

    /// Exact `\int_lo^hi dx / (x value(x))`; infinite when a touched piece
    /// has a nonpositive value.
    pub fn integral_recip_x(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check_range(lo, hi)?;
        if lo <= 0.0 {
            return Err(Error::DomainError(format!(
                "1/x integration needs a positive lower limit, got {lo}"
            )));
        }
        let mut total = 0.0;
        for (a, b, v) in self.pieces() {
            let s = a.max(lo);
            let e = b.min(hi);
            if s >= e {
                continue;
            }
            if v <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += (e / s).ln() / v;
        }
        Ok(total)
    }

    /// Exact `\int_lo^hi dx / value(x)`; infinite when a touched piece has a
    /// nonpositive value.
    pub fn integral_recip(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check_range(lo, hi)?;
        let mut total = 0.0;
        for (a, b, v) in self.pieces() {
            let s = a.max(lo);
            let e = b.min(hi);
            if s >= e {
                continue;
            }
            if v <= 0.0 {
                return Ok(f64::INFINITY);
            }
            total += (e - s) / v;
        }
        Ok(total)
    }

    fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        if !(lo <= hi) {
            return Err(Error::DomainError(format!(
                "integration range [{lo}, {hi}] is inverted"
            )));
        }
        Ok(())
    }
}
