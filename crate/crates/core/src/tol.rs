/// Numerical tolerances.
///
/// Construction tolerances (`frame_tol`, `herm_tol`, `eig_tol`) bound the
/// noise of the linear-algebra kernel; `certify_tol` is the threshold at
/// which a mathematical statement such as `dim(PVP) = 1` is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub certify_tol: f64,
    pub lp_tol: f64,
    pub solver_tol: f64,
    pub mult_tol: f64,
    pub frame_tol: f64,
    pub herm_tol: f64,
    pub eig_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            certify_tol: 1e-8,
            lp_tol: 1e-8,
            solver_tol: 1e-10,
            mult_tol: 1e-8,
            frame_tol: 1e-10,
            herm_tol: 1e-12,
            eig_tol: 1e-9,
        }
    }
}

impl Tolerances {
    /// Names accepted by [`Tolerances::set`].
    pub const NAMES: [&'static str; 5] = ["certify_tol", "lp_tol", "solver_tol", "mult_tol", "frame_tol"];

    /// Overrides a tolerance by name. Returns `false` for unknown names.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "certify_tol" => &mut self.certify_tol,
            "lp_tol" => &mut self.lp_tol,
            "solver_tol" => &mut self.solver_tol,
            "mult_tol" => &mut self.mult_tol,
            "frame_tol" => &mut self.frame_tol,
            _ => return false,
        };
        *slot = value;
        true
    }
}
