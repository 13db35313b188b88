//! Instantaneous eigenframes of an N-level Hamiltonian and the quantities
//! built from them along a time grid.
//!
//! A [`Frame`] stores the eigenbasis `{|φₙ(t)⟩}` at one instant together with
//! `R†(t)`, whose m-th row is `⟨φₘ|`. A [`FramePath`] is a uniform grid of
//! frames; `Ṙ` is taken by a central finite difference over that grid, which
//! gives the nonadiabatic matrix `iħR†Ṙ`, the counterdiabatic term
//! `iħṘR†`, and the residual of an adding Hamiltonian against the
//! nullification condition `(R†H_add R)ₙₘ = (iħR†Ṙ)ₙₘ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lz::AngleState;
use crate::smallmat::{CMat, CVec, C64, I};

/// Supplies an orthonormal eigenbasis for a Hamiltonian.
pub trait Eigensolver {
    fn eigenbasis(&self, h: &CMat) -> Result<Vec<CVec>>;
}

/// Closed-form solver for 2×2 Hermitian matrices.
///
/// Writing `H = m·I + ½[[−Δ, Ω e^{−iφ}], [Ω e^{iφ}, Δ]]`, the basis is
/// `cosθ e^{−iφ}|1⟩ − sinθ|2⟩`, `sinθ|1⟩ + cosθ e^{iφ}|2⟩` with
/// `θ = ½·atan2(Ω, Δ)`, the same phase convention as [`crate::lz`].
#[derive(Clone, Copy, Debug, Default)]
pub struct TwoLevelSolver;

impl Eigensolver for TwoLevelSolver {
    fn eigenbasis(&self, h: &CMat) -> Result<Vec<CVec>> {
        if h.dim() != 2 {
            return Err(Error::NoSolver(h.dim()));
        }
        let lower = h[(1, 0)];
        let delta = (h[(1, 1)] - h[(0, 0)]).re;
        let angle = AngleState {
            theta: 0.5 * libm::atan2(2.0 * lower.norm(), delta),
            theta_dot: 0.0,
            phi: libm::atan2(lower.im, lower.re),
            phi_dot: 0.0,
        };
        Ok(angle.eigenvectors().to_vec())
    }
}

/// A caller-supplied eigenbasis, returned as is.
#[derive(Clone, Debug)]
pub struct SuppliedBasis(pub Vec<CVec>);

impl Eigensolver for SuppliedBasis {
    fn eigenbasis(&self, _h: &CMat) -> Result<Vec<CVec>> {
        Ok(self.0.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub eigvecs: Vec<CVec>,
    pub eigvals: Vec<f64>,
    pub rot_adj: CMat,
}

impl Frame {
    /// Diagonalizes `h` with `solver`. Eigenvalues are the Rayleigh quotients
    /// `Re⟨φₙ|H|φₙ⟩`, so their order follows the solver's vectors.
    pub fn build(t: f64, h: &CMat, solver: &impl Eigensolver, tol: f64) -> Result<Frame> {
        let eigvecs = solver.eigenbasis(h)?;
        if eigvecs.len() != h.dim() {
            return Err(Error::DimensionMismatch { left: h.dim(), right: eigvecs.len() });
        }
        let residual = orthonormality_residual(&eigvecs)?;
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        let eigvals = eigvecs.iter().map(|v| Ok(v.inner(&h.apply(v)?)?.re)).collect::<Result<Vec<_>>>()?;
        let rot_adj = CMat::from_columns(&eigvecs)?.adjoint();
        Ok(Frame { t, eigvecs, eigvals, rot_adj })
    }

    pub fn dim(&self) -> usize {
        self.eigvecs.len()
    }

    pub fn rotation(&self) -> CMat {
        self.rot_adj.adjoint()
    }

    /// `max‖H|φₙ⟩ − Eₙ|φₙ⟩‖`.
    pub fn eigen_residual(&self, h: &CMat) -> Result<f64> {
        let mut worst = 0.0f64;
        for (v, e) in self.eigvecs.iter().zip(&self.eigvals) {
            let r = h.apply(v)?.add_scaled(v, C64::new(-e, 0.0))?;
            worst = worst.max(r.norm());
        }
        Ok(worst)
    }

    /// `‖R†R − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let id = CMat::identity(self.dim()).expect("frame dim");
        (&self.rot_adj * &self.rotation()).max_abs_diff(&id).expect("same dim")
    }

    /// `|ψᵉ⟩ = R†|ψ⟩`.
    pub fn to_eigen_picture(&self, psi: &CVec) -> Result<CVec> {
        self.rot_adj.apply(psi)
    }

    /// `R†H_add R`, the adding Hamiltonian expressed in the eigenbasis.
    pub fn transformed_add(&self, h_add: &CMat) -> Result<CMat> {
        self.rot_adj.mul(h_add)?.mul(&self.rotation())
    }

    fn with_vectors(&self, eigvecs: Vec<CVec>) -> Frame {
        let rot_adj = CMat::from_columns(&eigvecs).expect("same dim").adjoint();
        Frame { t: self.t, eigvecs, eigvals: self.eigvals.clone(), rot_adj }
    }
}

fn orthonormality_residual(vecs: &[CVec]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (n, u) in vecs.iter().enumerate() {
        for (m, v) in vecs.iter().enumerate() {
            let target = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((u.inner(v)? - C64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Finite-difference stencil for `Ṙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Stencil {
    /// `(R₊₁ − R₋₁)/2h`, error `O(h²)`.
    Central3,
    /// `(−R₊₂ + 8R₊₁ − 8R₋₁ + R₋₂)/12h`, error `O(h⁴)`.
    #[default]
    Central5,
}

impl Stencil {
    fn reach(self) -> usize {
        match self {
            Stencil::Central3 => 1,
            Stencil::Central5 => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FramePath {
    times: Vec<f64>,
    frames: Vec<Frame>,
    stencil: Stencil,
}

impl FramePath {
    /// Wraps frames sampled on a uniform, strictly increasing grid. The
    /// eigenvector gauge is kept as given but must be continuous:
    /// `Re⟨φₙ(tᵢ)|φₙ(tᵢ₊₁)⟩ > 0` for every n and i.
    pub fn new(frames: Vec<Frame>) -> Result<FramePath> {
        if frames.len() < 2 {
            return Err(Error::InvalidGrid);
        }
        let times: Vec<f64> = frames.iter().map(|f| f.t).collect();
        let h = times[1] - times[0];
        if h.is_nan() || h <= 0.0 || times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
            return Err(Error::InvalidGrid);
        }
        let dim = frames[0].dim();
        for (i, pair) in frames.windows(2).enumerate() {
            if pair[1].dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: pair[1].dim() });
            }
            for (a, b) in pair[0].eigvecs.iter().zip(&pair[1].eigvecs) {
                if a.inner(b)?.re <= 0.0 {
                    return Err(Error::PhaseAlignment { index: i });
                }
            }
        }
        Ok(FramePath { times, frames, stencil: Stencil::default() })
    }

    /// Like [`FramePath::new`], after rephasing every eigenvector so that its
    /// overlap with the previous sample is real and positive. Needed when the
    /// eigensolver returns an arbitrary gauge (dimension > 2).
    pub fn aligned(mut frames: Vec<Frame>) -> Result<FramePath> {
        for i in 1..frames.len() {
            let mut vecs = frames[i].eigvecs.clone();
            for (prev, v) in frames[i - 1].eigvecs.iter().zip(vecs.iter_mut()) {
                let overlap = prev.inner(v)?;
                if overlap.norm() == 0.0 {
                    return Err(Error::PhaseAlignment { index: i - 1 });
                }
                *v = v.scale(overlap.conj() / overlap.norm());
            }
            frames[i] = frames[i].with_vectors(vecs);
        }
        Self::new(frames)
    }

    /// Builds a frame at every grid time.
    pub fn sample(
        times: &[f64],
        hamiltonian: impl Fn(f64) -> CMat,
        solver: &impl Eigensolver,
        tol: f64,
    ) -> Result<FramePath> {
        let frames =
            times.iter().map(|&t| Frame::build(t, &hamiltonian(t), solver, tol)).collect::<Result<Vec<_>>>()?;
        Self::new(frames)
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Indices at which the stencil fits.
    pub fn interior(&self) -> core::ops::Range<usize> {
        let reach = self.stencil.reach();
        reach..self.len().saturating_sub(reach)
    }

    fn rotation_derivative(&self, i: usize) -> Result<CMat> {
        if !self.interior().contains(&i) {
            return Err(Error::BoundaryIndex { index: i, len: self.len() });
        }
        let r = |k: usize| self.frames[k].rotation();
        let h = self.step();
        let d = match self.stencil {
            Stencil::Central3 => (&r(i + 1) - &r(i - 1)).scale(C64::new(0.5 / h, 0.0)),
            Stencil::Central5 => {
                let near = &r(i + 1) - &r(i - 1);
                let far = &r(i + 2) - &r(i - 2);
                near.scale(C64::new(8.0, 0.0))
                    .add_scaled(&far, C64::new(-1.0, 0.0))?
                    .scale(C64::new(1.0 / (12.0 * h), 0.0))
            }
        };
        Ok(d)
    }

    /// `iħR†Ṙ` at grid index `i`. Its diagonal generates the adiabatic
    /// phases; the off-diagonal part is the nonadiabatic coupling.
    pub fn nonadiabatic_term(&self, i: usize) -> Result<CMat> {
        let rdot = self.rotation_derivative(i)?;
        Ok(self.frames[i].rot_adj.mul(&rdot)?.scale(I))
    }

    /// Counterdiabatic term `iħΣₙ|φ̇ₙ⟩⟨φₙ| = R (iħR†Ṙ) R†`.
    pub fn cd_term(&self, i: usize) -> Result<CMat> {
        let frame = &self.frames[i.min(self.len() - 1)];
        let na = self.nonadiabatic_term(i)?;
        frame.rotation().mul(&na)?.mul(&frame.rot_adj)
    }

    /// `max |(R†H_add R)ₙₘ − (iħR†Ṙ)ₙₘ|` over the requested ordered pairs
    /// (1-based levels, `n ≠ m`). Zero means those couplings are cancelled.
    pub fn nullification_residual(&self, i: usize, h_add: &CMat, pairs: &[(usize, usize)]) -> Result<f64> {
        let dim = self.frames[0].dim();
        for &(n, m) in pairs {
            if n == m {
                return Err(Error::DiagonalPair(n));
            }
            for level in [n, m] {
                if level == 0 || level > dim {
                    return Err(Error::LevelOutOfRange { level, dim });
                }
            }
        }
        let na = self.nonadiabatic_term(i)?;
        let added = self.frames[i].transformed_add(h_add)?;
        Ok(pairs.iter().map(|&(n, m)| (added[(n - 1, m - 1)] - na[(n - 1, m - 1)]).norm()).fold(0.0, f64::max))
    }
}
