//! Figure identifiers, sweep axes and grids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Figure {
    /// `α = α₀`, κ = 0.
    Fig1a,
    /// `α = α₀θ̇`, κ = 0.
    Fig1b,
    /// `α = α₀θ̇` with `β` dropped.
    Fig1c,
    /// Transitionless tracking, `α = −(κ/2)sin2θ`, over κ.
    Fig2a,
    /// `α = 0` over κ.
    Fig2b,
    /// No adding term over κ.
    Fig2c,
    /// Density evolution with `γ = 0.5`.
    Fig3,
    /// Relative populations over a grid of constant `γ`.
    Fig4,
    /// Density evolution with `γ = 1/(2 + t²)`.
    Fig5,
    /// `Im A₁₂(t)` for three choices of `γ`.
    Fig6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Alpha0,
    Kappa,
    Gamma,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Alpha0 => "alpha0",
            Axis::Kappa => "kappa",
            Axis::Gamma => "gamma",
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Axis::Alpha0 | Axis::Kappa => Grid { start: 0.0, end: 10.0, points: 101 },
            Axis::Gamma => Grid { start: 0.0, end: 1.0, points: 101 },
        }
    }
}

impl Figure {
    pub const ALL: [Figure; 10] = [
        Figure::Fig1a,
        Figure::Fig1b,
        Figure::Fig1c,
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig2c,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig1c => "fig1c",
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig2c => "fig2c",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }

    /// The swept parameter, if any.
    pub fn axis(self) -> Option<Axis> {
        match self {
            Figure::Fig1a | Figure::Fig1b | Figure::Fig1c => Some(Axis::Alpha0),
            Figure::Fig2a | Figure::Fig2b | Figure::Fig2c => Some(Axis::Kappa),
            Figure::Fig4 => Some(Axis::Gamma),
            Figure::Fig3 | Figure::Fig5 | Figure::Fig6 => None,
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1a | Figure::Fig1b | Figure::Fig1c => &["alpha0", "t", "p1", "p2", "norm"],
            Figure::Fig2a | Figure::Fig2b | Figure::Fig2c => &["kappa", "t", "p1", "p2", "norm"],
            Figure::Fig3 | Figure::Fig5 => &["t", "p1", "p2", "p1_rel", "p2_rel", "norm"],
            Figure::Fig4 => &["gamma", "t", "p1", "p2", "p1_rel", "p2_rel", "norm"],
            Figure::Fig6 => &["series", "t", "gamma", "im_a12"],
        }
    }

    /// Eigenstate protected by the non-Hermitian runs unless overridden:
    /// level 1 for the fixed-γ density runs, level 2 for the γ sweep and
    /// the pulse shapes.
    pub fn default_protected_level(self) -> Option<usize> {
        match self {
            Figure::Fig3 | Figure::Fig5 => Some(1),
            Figure::Fig4 | Figure::Fig6 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Figure::ALL.into_iter().find(|f| f.name() == key).ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// `points` evenly spaced values from `start` to `end` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        let g = Grid { start, end, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.points >= 1
            && self.start.is_finite()
            && self.end.is_finite()
            && (self.points == 1 || self.start != self.end);
        if ok {
            Ok(())
        } else {
            Err(Error::Grid(self.to_string()))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let span = self.end - self.start;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| if k + 1 == self.points { self.end } else { self.start + span * k as f64 / last })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.points)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Grid(s.to_string());
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let start = a.parse().map_err(|_| bad())?;
        let end = b.parse().map_err(|_| bad())?;
        let points = n.parse().map_err(|_| bad())?;
        Grid::new(start, end, points).map_err(|_| bad())
    }
}
