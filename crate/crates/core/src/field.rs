//! Rectangular phase-space grids and the fields sampled on them.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Uniform (x, k) lattice with x > 0. Values are stored row-major with x as the
/// slow index, so `index(i, j) = i * nk + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub k_min: f64,
    pub k_max: f64,
    pub nk: usize,
}

impl Default for PhaseSpaceGrid {
    fn default() -> Self {
        Self {
            x_min: 0.05,
            x_max: 4.0,
            nx: 241,
            k_min: -3.0,
            k_max: 3.0,
            nk: 241,
        }
    }
}

impl PhaseSpaceGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        nx: usize,
        k_min: f64,
        k_max: f64,
        nk: usize,
    ) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            nx,
            k_min,
            k_max,
            nk,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0) {
            return Err(Error::domain(
                "grid",
                format!("x_min = {} must be positive", self.x_min),
            ));
        }
        if !(self.x_max > self.x_min) || !self.x_max.is_finite() {
            return Err(Error::domain("grid", "x_max must exceed x_min"));
        }
        if !(self.k_max > self.k_min) || !self.k_min.is_finite() || !self.k_max.is_finite() {
            return Err(Error::domain("grid", "k_max must exceed k_min"));
        }
        if self.nx < 2 || self.nk < 2 {
            return Err(Error::domain("grid", "need at least two points per axis"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dk(&self) -> f64 {
        (self.k_max - self.k_min) / (self.nk - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx - 1 {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        }
    }

    /// k-coordinate; symmetric grids give exactly mirrored values.
    pub fn k(&self, j: usize) -> f64 {
        let mirror = self.nk - 1 - j;
        if self.k_min == -self.k_max && mirror < j {
            return -self.k(mirror);
        }
        if j == self.nk - 1 {
            self.k_max
        } else {
            self.k_min + j as f64 * self.dk()
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nk
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nk + j
    }

    /// The grid with its outer ring of points removed.
    pub fn interior(&self) -> Result<Self> {
        if self.nx < 3 || self.nk < 3 {
            return Err(Error::domain(
                "grid",
                "interior needs at least three points per axis",
            ));
        }
        Ok(Self {
            x_min: self.x(1),
            x_max: self.x(self.nx - 2),
            nx: self.nx - 2,
            k_min: self.k(1),
            k_max: self.k(self.nk - 2),
            nk: self.nk - 2,
        })
    }

    /// Evaluates `f` at every node, parallel over x-rows.
    ///
    /// Each value depends only on its own coordinates, so the result is
    /// identical for any thread count.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(f64, f64) -> Result<T> + Sync,
    {
        let rows: Vec<Vec<T>> = (0..self.nx)
            .into_par_iter()
            .map(|i| {
                let x = self.x(i);
                (0..self.nk)
                    .map(|j| f(x, self.k(j)))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<_>>()?;
        Ok(rows.into_iter().flatten().collect())
    }

    fn meta(&self) -> Value {
        json!({
            "x_min": self.x_min, "x_max": self.x_max, "nx": self.nx,
            "k_min": self.k_min, "k_max": self.k_max, "nk": self.nk,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: PhaseSpaceGrid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn evaluate(
        grid: PhaseSpaceGrid,
        f: impl Fn(f64, f64) -> Result<f64> + Sync,
    ) -> Result<Self> {
        let values = grid.map(f)?;
        Ok(Self { grid, values })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid rule over the whole grid.
    pub fn integral(&self) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for i in 0..g.nx {
            let wx = if i == 0 || i == g.nx - 1 { 0.5 } else { 1.0 };
            for j in 0..g.nk {
                let wk = if j == 0 || j == g.nk - 1 { 0.5 } else { 1.0 };
                acc += wx * wk * self.at(i, j);
            }
        }
        acc * g.dx() * g.dk()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,k,value\n");
        for i in 0..self.grid.nx {
            for j in 0..self.grid.nk {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_num(self.grid.x(i)),
                    fmt_num(self.grid.k(j)),
                    fmt_num(self.at(i, j))
                );
            }
        }
        out
    }

    pub fn to_json_data(&self) -> Value {
        json!({ "grid": self.grid.meta(), "values": self.values })
    }
}

/// Sampled (J_x, J_k) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: PhaseSpaceGrid,
    pub jx: Vec<f64>,
    pub jk: Vec<f64>,
}

impl VectorField {
    pub fn evaluate(
        grid: PhaseSpaceGrid,
        f: impl Fn(f64, f64) -> Result<(f64, f64)> + Sync,
    ) -> Result<Self> {
        let pairs = grid.map(f)?;
        let (jx, jk) = pairs.into_iter().unzip();
        Ok(Self { grid, jx, jk })
    }

    pub fn at(&self, i: usize, j: usize) -> (f64, f64) {
        let n = self.grid.index(i, j);
        (self.jx[n], self.jk[n])
    }

    pub fn max_norm(&self) -> f64 {
        self.jx
            .iter()
            .zip(&self.jk)
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }

    /// Second-order central-difference ∂_x J_x + ∂_k J_k on the interior.
    pub fn divergence(&self) -> Result<ScalarField> {
        let g = &self.grid;
        let inner = g.interior()?;
        let (hx, hk) = (g.dx(), g.dk());
        let mut values = Vec::with_capacity(inner.len());
        for i in 1..g.nx - 1 {
            for j in 1..g.nk - 1 {
                let dx = (self.jx[g.index(i + 1, j)] - self.jx[g.index(i - 1, j)]) / (2.0 * hx);
                let dk = (self.jk[g.index(i, j + 1)] - self.jk[g.index(i, j - 1)]) / (2.0 * hk);
                values.push(dx + dk);
            }
        }
        Ok(ScalarField {
            grid: inner,
            values,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,k,j_x,j_k\n");
        for i in 0..self.grid.nx {
            for j in 0..self.grid.nk {
                let (a, b) = self.at(i, j);
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_num(self.grid.x(i)),
                    fmt_num(self.grid.k(j)),
                    fmt_num(a),
                    fmt_num(b)
                );
            }
        }
        out
    }

    pub fn to_json_data(&self) -> Value {
        json!({ "grid": self.grid.meta(), "j_x": self.jx, "j_k": self.jk })
    }
}

/// 17 significant digits, lowercase exponent; round-trips through `parse`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}
