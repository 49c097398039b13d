//! Kernels `kappa(x, y)`: presets, evaluation, discretization to cell
//! matrices, irreducibility classification, and integral summaries.
//!
//! All presets are symmetric and nonnegative. Discretization replaces the
//! kernel by its infimum, cell-center value, or supremum on each cell pair;
//! for the monotone presets the extrema sit at cell corners so the lower and
//! upper matrices come out in closed form and bracket the midpoint matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;
use crate::spaces::{SpaceKind, TypeSpace};

/// A nonnegative step function on `(0, 1]`: value `values[k]` on
/// `(breaks[k], breaks[k+1]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFn {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFn {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1
            || breaks.first() != Some(&0.0)
            || breaks.last() != Some(&1.0)
            || breaks.windows(2).any(|w| w[0] >= w[1])
            || values.iter().any(|&v| !(v >= 0.0))
        {
            return Err(Error::Domain(String::from("malformed step function table")));
        }
        Ok(StepFn { breaks, values })
    }

    /// Value at `x` under `(a, b]` membership.
    pub fn eval(&self, x: f64) -> f64 {
        let mut i = 0;
        while i + 1 < self.values.len() && self.breaks[i + 1] < x {
            i += 1;
        }
        self.values[i]
    }

    /// (inf, sup) over the interval `(lo, hi]`.
    fn range(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut inf = f64::INFINITY;
        let mut sup = 0.0f64;
        for (k, &v) in self.values.iter().enumerate() {
            let (a, b) = (self.breaks[k], self.breaks[k + 1]);
            if b > lo && a < hi {
                if v < inf {
                    inf = v;
                }
                if v > sup {
                    sup = v;
                }
            }
        }
        if inf > sup {
            (0.0, 0.0)
        } else {
            (inf, sup)
        }
    }
}

/// Kernel presets. `x`, `y` range over `(0, 1]` for the closed forms;
/// `FiniteMatrix` kernels take cell labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum KernelForm {
    /// `kappa = c`.
    Constant(f64),
    /// Explicit symmetric nonnegative `r x r` matrix on a finite space.
    FiniteMatrix { k: Vec<f64>, r: usize },
    /// `psi(x) psi(y)` with `psi(x) = a x^{-1/p}`, `p > 1`.
    Rank1 { p: f64, a: f64 },
    /// `c / max(x, y)`.
    Dubins { c: f64 },
    /// `2 delta (1/max(x, y) - 1)`.
    Chkns { delta: f64 },
    /// `(2 lambda / (1 - delta)) ((max(x, y))^{delta - 1} - 1)` for
    /// `delta > 0`, with the exact `delta = 1` limit `2 lambda ln(1/max)`.
    Turova { lambda: f64, delta: f64 },
    /// `1[x + y <= 1]`.
    HalfTriangle,
    /// `c / (2w)` when the circular distance of `x, y` is at most `w`.
    Window { c: f64, w: f64 },
    /// `phi(max(x, y))` for a step function `phi`.
    MaxType { table: StepFn },
}

/// A kernel: a preset form plus a global scale multiplier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub form: KernelForm,
    pub scale: f64,
}

impl Kernel {
    fn of(form: KernelForm) -> Self {
        Kernel { form, scale: 1.0 }
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::Domain(String::from("constant kernel needs c >= 0")));
        }
        Ok(Self::of(KernelForm::Constant(c)))
    }

    /// Row-major symmetric nonnegative matrix.
    pub fn finite_matrix(k: Vec<f64>, r: usize) -> Result<Self> {
        if k.len() != r * r || r == 0 {
            return Err(Error::Domain(String::from("matrix kernel must be square")));
        }
        for i in 0..r {
            for j in 0..r {
                let v = k[i * r + j];
                if !(v >= 0.0) {
                    return Err(Error::Domain(String::from("matrix kernel must be nonnegative")));
                }
                if v != k[j * r + i] {
                    return Err(Error::Domain(String::from("matrix kernel must be symmetric")));
                }
            }
        }
        Ok(Self::of(KernelForm::FiniteMatrix { k, r }))
    }

    /// `psi(x) = a x^{-1/p}`; rejects `p <= 1` (non-integrable activity).
    pub fn rank1(p: f64, a: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::Domain(String::from(
                "rank-1 tail exponent must satisfy p > 1",
            )));
        }
        if !(a >= 0.0) {
            return Err(Error::Domain(String::from("rank-1 scale must be nonnegative")));
        }
        Ok(Self::of(KernelForm::Rank1 { p, a }))
    }

    pub fn dubins(c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::Domain(String::from("dubins kernel needs c >= 0")));
        }
        Ok(Self::of(KernelForm::Dubins { c }))
    }

    pub fn chkns(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::Domain(String::from("chkns kernel needs delta >= 0")));
        }
        Ok(Self::of(KernelForm::Chkns { delta }))
    }

    /// `delta = 0` is aliased to the CHKNS form (its exact limit);
    /// `delta < 0` is rejected.
    pub fn turova(lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::Domain(String::from("turova kernel needs lambda >= 0")));
        }
        if delta < 0.0 {
            return Err(Error::Domain(String::from(
                "turova kernel needs delta >= 0 (delta = 0 is the chkns form)",
            )));
        }
        if delta == 0.0 {
            return Self::chkns(lambda);
        }
        Ok(Self::of(KernelForm::Turova { lambda, delta }))
    }

    pub fn half_triangle() -> Self {
        Self::of(KernelForm::HalfTriangle)
    }

    pub fn window(c: f64, w: f64) -> Result<Self> {
        if !(c >= 0.0) || !(w > 0.0 && w <= 0.5) {
            return Err(Error::Domain(String::from(
                "window kernel needs c >= 0 and 0 < w <= 1/2",
            )));
        }
        Ok(Self::of(KernelForm::Window { c, w }))
    }

    pub fn max_type(table: StepFn) -> Self {
        Self::of(KernelForm::MaxType { table })
    }

    /// Multiply the global scale.
    pub fn scaled(mut self, s: f64) -> Self {
        self.scale *= s;
        self
    }

    pub fn with_scale(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }

    /// Pointwise value. For `FiniteMatrix`, `x` and `y` are cell labels.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.scale * self.form_eval(x, y)
    }

    fn form_eval(&self, x: f64, y: f64) -> f64 {
        let mx = if x > y { x } else { y };
        match &self.form {
            KernelForm::Constant(c) => *c,
            KernelForm::FiniteMatrix { k, r } => {
                let (i, j) = (x as usize, y as usize);
                k[i * r + j]
            }
            KernelForm::Rank1 { p, a } => a * a * math::powf(x * y, -1.0 / p),
            KernelForm::Dubins { c } => c / mx,
            KernelForm::Chkns { delta } => 2.0 * delta * (1.0 / mx - 1.0),
            KernelForm::Turova { lambda, delta } => turova_phi(*lambda, *delta, mx),
            KernelForm::HalfTriangle => {
                if x + y <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelForm::Window { c, w } => {
                if circular_distance(x, y) <= *w {
                    c / (2.0 * w)
                } else {
                    0.0
                }
            }
            KernelForm::MaxType { table } => table.eval(mx),
        }
    }

    /// Whether the form is unbounded near the origin, which matters for
    /// upper-mode discretization.
    pub fn unbounded_at_origin(&self) -> bool {
        match &self.form {
            KernelForm::Rank1 { .. } | KernelForm::Dubins { .. } => true,
            KernelForm::Chkns { delta } => *delta > 0.0,
            KernelForm::Turova { delta, .. } => *delta <= 1.0,
            _ => false,
        }
    }

    /// Whether the closed form needs an interval space to discretize.
    fn needs_interval(&self) -> bool {
        !matches!(
            self.form,
            KernelForm::Constant(_) | KernelForm::FiniteMatrix { .. }
        )
    }

    /// (inf, sup) of the unscaled form over the cell rectangle
    /// `(a1, b1] x (a2, b2]`, computed at corners for the monotone presets
    /// and by interval arithmetic for the indicator presets. `sup` may be
    /// `f64::INFINITY` for cells touching 0.
    fn form_range(&self, a1: f64, b1: f64, a2: f64, b2: f64) -> (f64, f64) {
        match &self.form {
            KernelForm::Constant(c) => (*c, *c),
            KernelForm::FiniteMatrix { .. } => unreachable!("matrix kernels pass through"),
            KernelForm::Rank1 { p, a } => {
                let inf = a * a * math::powf(b1 * b2, -1.0 / p);
                let sup = if a1 == 0.0 || a2 == 0.0 {
                    f64::INFINITY
                } else {
                    a * a * math::powf(a1 * a2, -1.0 / p)
                };
                (inf, sup)
            }
            KernelForm::Dubins { .. }
            | KernelForm::Chkns { .. }
            | KernelForm::Turova { .. }
            | KernelForm::MaxType { .. } => {
                // all are functions of max(x, y); max ranges over
                // (max(a1, a2), max(b1, b2)]
                let mlo = if a1 > a2 { a1 } else { a2 };
                let mhi = if b1 > b2 { b1 } else { b2 };
                match &self.form {
                    KernelForm::MaxType { table } => table.range(mlo, mhi),
                    _ => {
                        // phi decreasing in max for these presets
                        let inf = self.phi_of_max(mhi);
                        let sup = if mlo == 0.0 {
                            f64::INFINITY
                        } else {
                            self.phi_of_max(mlo)
                        };
                        (inf, sup)
                    }
                }
            }
            KernelForm::HalfTriangle => {
                let inf = if b1 + b2 <= 1.0 { 1.0 } else { 0.0 };
                let sup = if a1 + a2 < 1.0 { 1.0 } else { 0.0 };
                (inf, sup)
            }
            KernelForm::Window { c, w } => {
                let (dmin, dmax) = circular_distance_range(a1, b1, a2, b2);
                let v = c / (2.0 * w);
                let inf = if dmax <= *w { v } else { 0.0 };
                let sup = if dmin <= *w { v } else { 0.0 };
                (inf, sup)
            }
        }
    }

    fn phi_of_max(&self, m: f64) -> f64 {
        match &self.form {
            KernelForm::Dubins { c } => c / m,
            KernelForm::Chkns { delta } => 2.0 * delta * (1.0 / m - 1.0),
            KernelForm::Turova { lambda, delta } => turova_phi(*lambda, *delta, m),
            _ => unreachable!(),
        }
    }
}

fn turova_phi(lambda: f64, delta: f64, m: f64) -> f64 {
    if math::abs(delta - 1.0) < 1e-12 {
        2.0 * lambda * math::ln(1.0 / m)
    } else {
        (2.0 * lambda / (1.0 - delta)) * (math::powf(m, delta - 1.0) - 1.0)
    }
}

/// min over the circle of length 1.
fn circular_distance(x: f64, y: f64) -> f64 {
    let d = math::abs(x - y);
    if d < 1.0 - d {
        d
    } else {
        1.0 - d
    }
}

/// (min, max) of the circular distance over `[a1, b1] x [a2, b2]`.
fn circular_distance_range(a1: f64, b1: f64, a2: f64, b2: f64) -> (f64, f64) {
    // t = |x - y| ranges over [tlo, thi]
    let dlo = a1 - b2;
    let dhi = b1 - a2;
    let tlo = if dlo <= 0.0 && dhi >= 0.0 {
        0.0
    } else {
        let m1 = math::abs(dlo);
        let m2 = math::abs(dhi);
        if m1 < m2 {
            m1
        } else {
            m2
        }
    };
    let thi = math::abs(dlo).max(math::abs(dhi));
    // circ(t) = min(t, 1 - t) rises to 1/2 at t = 1/2 then falls
    let c_lo = circ_of(tlo).min(circ_of(thi));
    let c_hi = if tlo <= 0.5 && thi >= 0.5 {
        0.5
    } else {
        circ_of(tlo).max(circ_of(thi))
    };
    (c_lo, c_hi)
}

fn circ_of(t: f64) -> f64 {
    if t < 1.0 - t {
        t
    } else {
        1.0 - t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscretizeMode {
    Lower,
    Midpoint,
    Upper,
}

impl core::fmt::Display for DiscretizeMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            DiscretizeMode::Lower => "lower",
            DiscretizeMode::Midpoint => "midpoint",
            DiscretizeMode::Upper => "upper",
        })
    }
}

/// A regular-finitary kernel: values of `kappa` on cell pairs plus the cell
/// weights of the originating space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteKernel {
    /// Row-major `r x r` symmetric matrix.
    pub k: Vec<f64>,
    pub r: usize,
    pub w: Vec<f64>,
    pub space: TypeSpace,
    pub mode: DiscretizeMode,
    /// True when upper-mode values were clamped on singular cells.
    pub clamped: bool,
    /// Free-form label used in graph metadata.
    pub label: String,
}

impl DiscreteKernel {
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.k[i * self.r + j]
    }

    /// Entrywise scaling by `s >= 0`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.k {
            *v *= s;
        }
        out
    }

    /// Row intensity `lambda_i = sum_j K_ij w_j`.
    pub fn row_intensities(&self) -> Vec<f64> {
        let mut lam = vec![0.0; self.r];
        for i in 0..self.r {
            let row = &self.k[i * self.r..(i + 1) * self.r];
            lam[i] = row.iter().zip(self.w.iter()).map(|(k, w)| k * w).sum();
        }
        lam
    }

    /// `1/2 sum_ij K_ij w_i w_j`, the limit of `e(G)/n`.
    pub fn mean_edge_density(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.r {
            let row = &self.k[i * self.r..(i + 1) * self.r];
            let wi = self.w[i];
            acc += wi * row.iter().zip(self.w.iter()).map(|(k, w)| k * w).sum::<f64>();
        }
        0.5 * acc
    }

    /// Hilbert-Schmidt norm `(sum_ij K_ij^2 w_i w_j)^{1/2}`.
    pub fn hs_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.r {
            let row = &self.k[i * self.r..(i + 1) * self.r];
            let wi = self.w[i];
            acc += wi * row.iter().zip(self.w.iter()).map(|(k, w)| k * k * w).sum::<f64>();
        }
        math::sqrt(acc)
    }

    /// Classify the support structure of the kernel on positive-weight cells.
    pub fn irreducibility(&self) -> Irreducibility {
        let positive: Vec<usize> = (0..self.r).filter(|&i| self.w[i] > 0.0).collect();
        if positive.is_empty() {
            return Irreducibility::Reducible { classes: Vec::new() };
        }
        // zero-row cells: no positive entry towards any positive-weight cell
        let is_zero_row: Vec<bool> = positive
            .iter()
            .map(|&i| positive.iter().all(|&j| self.entry(i, j) == 0.0))
            .collect();
        // connected components among non-zero-row positive cells
        let active: Vec<usize> = positive
            .iter()
            .copied()
            .zip(is_zero_row.iter())
            .filter(|(_, z)| !**z)
            .map(|(i, _)| i)
            .collect();
        let mut comp_of = vec![usize::MAX; self.r];
        let mut n_comps = 0;
        for &start in &active {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp_of[start] = n_comps;
            while let Some(i) = stack.pop() {
                for &j in &active {
                    if comp_of[j] == usize::MAX && self.entry(i, j) > 0.0 {
                        comp_of[j] = n_comps;
                        stack.push(j);
                    }
                }
            }
            n_comps += 1;
        }
        let zero_rows = is_zero_row.iter().filter(|z| **z).count();
        if n_comps == 1 && zero_rows == 0 {
            Irreducibility::Irreducible
        } else if n_comps == 1 {
            Irreducibility::QuasiIrreducible { support: active }
        } else {
            let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n_comps];
            for &i in &active {
                classes[comp_of[i]].push(i);
            }
            for (&i, &z) in positive.iter().zip(is_zero_row.iter()) {
                if z {
                    classes.push(vec![i]);
                }
            }
            Irreducibility::Reducible { classes }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    Irreducible,
    QuasiIrreducible { support: Vec<usize> },
    Reducible { classes: Vec<Vec<usize>> },
}

/// Discretize a kernel on a space. Upper mode on a kernel unbounded near 0
/// is an error here; use [`discretize_capped`] to clamp instead.
pub fn discretize(kernel: &Kernel, space: &TypeSpace, mode: DiscretizeMode) -> Result<DiscreteKernel> {
    discretize_capped(kernel, space, mode, None)
}

/// Discretize with an optional clamp for upper mode on singular kernels.
/// Clamped results are flagged.
pub fn discretize_capped(
    kernel: &Kernel,
    space: &TypeSpace,
    mode: DiscretizeMode,
    upper_cap: Option<f64>,
) -> Result<DiscreteKernel> {
    let r = space.len();
    // explicit matrices pass through
    if let KernelForm::FiniteMatrix { k, r: kr } = &kernel.form {
        if space.kind() != SpaceKind::Finite || *kr != r {
            return Err(Error::ModeMismatch(format!(
                "matrix kernel of size {kr} needs a finite space with {kr} cells"
            )));
        }
        let k = k.iter().map(|v| v * kernel.scale).collect();
        return Ok(DiscreteKernel {
            k,
            r,
            w: space.weights().to_vec(),
            space: space.clone(),
            mode,
            clamped: false,
            label: format!("matrix:r={r}"),
        });
    }
    if kernel.needs_interval() && !space.is_interval() {
        return Err(Error::ModeMismatch(String::from(
            "closed-form kernels discretize on interval spaces only",
        )));
    }
    if mode == DiscretizeMode::Upper && kernel.unbounded_at_origin() && upper_cap.is_none() {
        return Err(Error::UnboundedApproximation(String::from(
            "upper mode on a kernel unbounded at 0 requires an explicit cap",
        )));
    }

    let mut k = vec![0.0; r * r];
    let mut clamped = false;
    match &kernel.form {
        KernelForm::Constant(c) => {
            let v = c * kernel.scale;
            k.iter_mut().for_each(|e| *e = v);
        }
        _ => {
            for i in 0..r {
                let (a1, b1) = space.cell_bounds(i);
                for j in i..r {
                    let (a2, b2) = space.cell_bounds(j);
                    let v = match mode {
                        DiscretizeMode::Midpoint => kernel.eval(space.midpoint(i), space.midpoint(j)),
                        DiscretizeMode::Lower => kernel.scale * kernel.form_range(a1, b1, a2, b2).0,
                        DiscretizeMode::Upper => {
                            let sup = kernel.scale * kernel.form_range(a1, b1, a2, b2).1;
                            match upper_cap {
                                Some(cap) if sup > cap => {
                                    clamped = true;
                                    cap
                                }
                                _ => {
                                    if sup.is_infinite() {
                                        return Err(Error::UnboundedApproximation(String::from(
                                            "upper mode hit an unbounded cell without a cap",
                                        )));
                                    }
                                    sup
                                }
                            }
                        }
                    };
                    k[i * r + j] = v;
                    k[j * r + i] = v;
                }
            }
        }
    }
    Ok(DiscreteKernel {
        k,
        r,
        w: space.weights().to_vec(),
        space: space.clone(),
        mode,
        clamped,
        label: format!("{:?}", kernel.form_tag()),
    })
}

impl Kernel {
    fn form_tag(&self) -> &'static str {
        match self.form {
            KernelForm::Constant(_) => "constant",
            KernelForm::FiniteMatrix { .. } => "matrix",
            KernelForm::Rank1 { .. } => "rank1",
            KernelForm::Dubins { .. } => "dubins",
            KernelForm::Chkns { .. } => "chkns",
            KernelForm::Turova { .. } => "turova",
            KernelForm::HalfTriangle => "halftriangle",
            KernelForm::Window { .. } => "window",
            KernelForm::MaxType { .. } => "maxtype",
        }
    }
}
