use std::f64::consts::FRAC_1_SQRT_2;

use crate::{Error, Result, C64};

/// Single-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Z,
    /// `diag(1, e^{i xi})`.
    Rz(f64),
    /// Arbitrary 2x2 matrix, row major. Callers are responsible for unitarity.
    Matrix([[C64; 2]; 2]),
}

impl Gate {
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        match *self {
            Gate::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate::X => [[o, l], [l, o]],
            Gate::Z => [[l, o], [o, -l]],
            Gate::Rz(xi) => [[l, o], [o, C64::from_polar(1.0, xi)]],
            Gate::Matrix(m) => m,
        }
    }

    /// Matrix product `self * other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &Gate) -> Gate {
        let a = self.matrix();
        let b = other.matrix();
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Gate::Matrix(m)
    }

    pub fn adjoint(&self) -> Gate {
        let m = self.matrix();
        Gate::Matrix([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }
}

/// Two-qubit diagonal entanglers generated by an Ising-type interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Entangler {
    /// Phase on `|11>`.
    Cs,
    /// Phase on `|10>` (control 1, target 0).
    #[default]
    Csx,
}

impl Entangler {
    /// Control and target bits that pick up the phase.
    pub(crate) fn active_bits(self) -> (bool, bool) {
        match self {
            Entangler::Cs => (true, true),
            Entangler::Csx => (true, false),
        }
    }
}

/// Phase accumulated by an interaction of strength `g` for time `t`.
pub fn phase_from_interaction(g: f64, t: f64, hbar: f64) -> Result<f64> {
    if hbar.is_nan() || hbar <= 0.0 {
        return Err(Error::NonPositiveHbar(hbar));
    }
    let phi = g * t / hbar;
    if !phi.is_finite() {
        return Err(Error::NonFinite(phi));
    }
    Ok(phi)
}
