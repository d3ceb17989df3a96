/// Numeric tolerances shared by every validation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-abs deviation allowed between a matrix and its adjoint.
    pub hermiticity: f64,
    /// Allowed deviation of a trace (or vector norm) from one.
    pub trace: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub psd_floor: f64,
    /// Absolute tolerance for comparing probabilities.
    pub probability: f64,
    /// Max-abs entry gap below which `rho == dephase(rho)`.
    pub fixed_point: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-12,
        trace: 1e-12,
        psd_floor: -1e-10,
        probability: 1e-9,
        fixed_point: 1e-10,
    };

    pub const STRICT: Tolerances = Tolerances {
        hermiticity: 1e-13,
        trace: 1e-13,
        psd_floor: -1e-12,
        probability: 1e-11,
        fixed_point: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
