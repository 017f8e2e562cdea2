//! Matsubara summation and wavevector quadrature for the plate–plate
//! pressure/free energy, plus the proximity-force sphere–plate mapping.

use super::reflection::{mirror_at_xi, mirror_at_zero, MirrorAtXi, MirrorAtZero};
use super::{LayeredMirror, LifshitzError, MatsubaraGrid, QuadratureSpec, ZeroFrequencyPolicy};
use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT};
use crate::numerics::{pairwise_sum, GaussLaguerre};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Separation domain accepted by the plate–plate operations.
pub const MIN_SEPARATION: f64 = 1e-9;
pub const MAX_SEPARATION: f64 = 10e-6;

/// Gauss–Laguerre refinement ladder: each rung doubles the node count of
/// the previous one starting from `QuadratureSpec::base_nodes`.
const LADDER_RUNGS: usize = 4;
const MAX_NODES: usize = 128;

/// d/R beyond which the proximity-force approximation is flagged.
pub const PFA_VALIDITY_LIMIT: f64 = 0.05;

/// Number of trailing terms used for the geometric tail extrapolation.
const TAIL_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy)]
enum Observable {
    Pressure,
    FreeEnergy,
}

/// Integrand of one Matsubara term after the substitution y = 2q_l·d,
/// written as ∫₀^∞ f(u)·e^(−u) du with y = a + u, a = 2ξ_l·d/c:
///
/// * pressure:   f(u) = y²·Σ_p R_p e^(−a) / (1 − R_p e^(−y))
/// * free energy: f(u) = y·e^(u)·Σ_p ln(1 − R_p e^(−y))
///
/// with R_p the product of the two mirrors' coefficients at
/// k = √(u(u + 2a))/(2d). The e^u factor of the energy integrand is
/// evaluated through a series once R e^(−y) < 1e-8, so it never overflows.
struct TermIntegrand<'a> {
    a: f64,
    exp_neg_a: f64,
    inv_2d: f64,
    xi: f64,
    m1: Reflector<'a>,
    m2: Reflector<'a>,
    observable: Observable,
}

enum Reflector<'a> {
    General(&'a MirrorAtXi),
    Zero(&'a MirrorAtZero),
}

impl Reflector<'_> {
    fn reflect(&self, xi: f64, k: f64) -> (f64, f64) {
        match self {
            Reflector::General(m) => m.reflect(xi, k),
            Reflector::Zero(m) => m.reflect(k),
        }
    }
}

impl TermIntegrand<'_> {
    fn eval(&self, u: f64) -> f64 {
        let y = self.a + u;
        let k = (u * (u + 2.0 * self.a)).sqrt() * self.inv_2d;
        let (te1, tm1) = self.m1.reflect(self.xi, k);
        let (te2, tm2) = self.m2.reflect(self.xi, k);
        let r_te = te1 * te2;
        let r_tm = tm1 * tm2;
        match self.observable {
            Observable::Pressure => {
                let exp_neg_y = self.exp_neg_a * (-u).exp();
                let mut s = 0.0;
                for r in [r_te, r_tm] {
                    if r != 0.0 {
                        s += r * self.exp_neg_a / (1.0 - r * exp_neg_y);
                    }
                }
                y * y * s
            }
            Observable::FreeEnergy => {
                let exp_neg_y = self.exp_neg_a * (-u).exp();
                let mut s = 0.0;
                for r in [r_te, r_tm] {
                    let x = r * exp_neg_y;
                    if x == 0.0 {
                        continue;
                    }
                    if x.abs() < 1e-8 {
                        // e^u·ln(1−x) = −(R e^−a)(1 + x/2 + x²/3 + ...)
                        s -= r * self.exp_neg_a * (1.0 + 0.5 * x + x * x / 3.0);
                    } else {
                        s += u.exp() * (-x).ln_1p();
                    }
                }
                y * s
            }
        }
    }
}

/// Adaptive Gauss–Laguerre evaluation of one Matsubara term.
fn integrate_term(
    integrand: &TermIntegrand<'_>,
    quad: &QuadratureSpec,
) -> Result<f64, LifshitzError> {
    let mut nodes = quad.base_nodes;
    let mut previous: Option<f64> = None;
    let mut achieved = f64::INFINITY;
    for _ in 0..LADDER_RUNGS {
        let rule = GaussLaguerre::with_order(nodes.min(MAX_NODES));
        let value = rule.integrate(|u| integrand.eval(u));
        if let Some(prev) = previous {
            let scale = value.abs().max(1e-300);
            achieved = (value - prev).abs() / scale;
            if achieved <= quad.tolerance {
                return Ok(value);
            }
        }
        previous = Some(value);
        if nodes >= MAX_NODES {
            break;
        }
        nodes *= 2;
    }
    if achieved.is_infinite() {
        return Ok(previous.unwrap_or(0.0));
    }
    Err(LifshitzError::QuadratureNotConverged {
        achieved,
        target: quad.tolerance,
    })
}

/// Primed Matsubara sum Σ'_l of the chosen observable's term integrals.
///
/// Terms are evaluated in parallel blocks and stored in index order, then
/// reduced with pairwise summation, so the result is bit-stable across
/// worker counts. The adaptive cutoff extrapolates the tail geometrically
/// from the trailing terms.
fn matsubara_sum(
    m1: &LayeredMirror,
    m2: &LayeredMirror,
    d: f64,
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
    observable: Observable,
) -> Result<f64, LifshitzError> {
    let inv_2d = 1.0 / (2.0 * d);
    let zero1 = mirror_at_zero(m1, policy);
    let zero2 = mirror_at_zero(m2, policy);
    let zero_term = integrate_term(
        &TermIntegrand {
            a: 0.0,
            exp_neg_a: 1.0,
            inv_2d,
            xi: 0.0,
            m1: Reflector::Zero(&zero1),
            m2: Reflector::Zero(&zero2),
            observable,
        },
        quad,
    )?;

    let cutoff = grid.cutoff();
    let mut terms: Vec<f64> = Vec::with_capacity(256);
    let mut running = 0.5 * zero_term;
    const BLOCK: usize = 32;
    let mut l_start = 1usize;
    loop {
        let l_end = (l_start + BLOCK - 1).min(cutoff.max_terms);
        let block: Result<Vec<f64>, LifshitzError> = (l_start..=l_end)
            .into_par_iter()
            .map(|l| {
                let xi = grid.xi(l);
                let a = 2.0 * xi * d / SPEED_OF_LIGHT;
                let at1 = mirror_at_xi(m1, xi);
                let at2 = mirror_at_xi(m2, xi);
                integrate_term(
                    &TermIntegrand {
                        a,
                        exp_neg_a: if a > 745.0 { 0.0 } else { (-a).exp() },
                        inv_2d,
                        xi,
                        m1: Reflector::General(&at1),
                        m2: Reflector::General(&at2),
                        observable,
                    },
                    quad,
                )
            })
            .collect();
        let block = block?;
        for t in block {
            running += t;
            terms.push(t);
        }

        let n = terms.len();
        if n >= TAIL_WINDOW + 1 {
            let last = terms[n - 1].abs();
            let prev = terms[n - 1 - (TAIL_WINDOW - 1)].abs();
            let tail = if last == 0.0 {
                0.0
            } else if prev <= last {
                f64::INFINITY
            } else {
                let ratio = (last / prev)
                    .powf(1.0 / (TAIL_WINDOW - 1) as f64)
                    .min(0.999_999);
                last * ratio / (1.0 - ratio)
            };
            let scale = running.abs().max(1e-300);
            if tail <= cutoff.tail_fraction * scale {
                break;
            }
            if l_end >= cutoff.max_terms {
                return Err(LifshitzError::MatsubaraNotConverged {
                    terms: n,
                    tail_estimate: tail / scale,
                    target: cutoff.tail_fraction,
                });
            }
        } else if l_end >= cutoff.max_terms {
            break;
        }
        l_start = l_end + 1;
    }

    Ok(0.5 * zero_term + pairwise_sum(&terms))
}

fn check_inputs(d: f64, quad: &QuadratureSpec) -> Result<(), LifshitzError> {
    if !(d.is_finite() && (MIN_SEPARATION..=MAX_SEPARATION).contains(&d)) {
        return Err(LifshitzError::SeparationOutOfRange(d));
    }
    quad.validate()
}

/// Casimir pressure between two parallel layered mirrors, Pa.
/// Negative = attractive; |P| decreases monotonically with `d`.
pub fn plate_plate_pressure(
    m1: &LayeredMirror,
    m2: &LayeredMirror,
    d: f64,
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
) -> Result<f64, LifshitzError> {
    check_inputs(d, quad)?;
    let sum = matsubara_sum(m1, m2, d, grid, quad, policy, Observable::Pressure)?;
    Ok(-BOLTZMANN * grid.temperature() / (8.0 * PI * d * d * d) * sum)
}

/// Casimir free energy per unit area between two parallel mirrors, J/m².
/// Negative (binding); P = −∂E/∂d.
pub fn plate_plate_free_energy(
    m1: &LayeredMirror,
    m2: &LayeredMirror,
    d: f64,
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
) -> Result<f64, LifshitzError> {
    check_inputs(d, quad)?;
    let sum = matsubara_sum(m1, m2, d, grid, quad, policy, Observable::FreeEnergy)?;
    Ok(BOLTZMANN * grid.temperature() / (8.0 * PI * d * d) * sum)
}

/// Result of a proximity-force sphere–plate evaluation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpherePlateResult {
    pub value: f64,
    /// Set when d/R exceeds the PFA validity guard (0.05).
    pub pfa_validity_warning: bool,
}

fn check_radius(radius: f64) -> Result<(), LifshitzError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(LifshitzError::InvalidParameter(format!(
            "sphere radius must be > 0, got {radius}"
        )));
    }
    Ok(())
}

/// Sphere–plate Casimir force via the proximity-force approximation,
/// F(d) = 2πR·E(d). Negative = attractive.
pub fn sphere_plate_force(
    radius: f64,
    d: f64,
    m_sphere: &LayeredMirror,
    m_plate: &LayeredMirror,
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
) -> Result<SpherePlateResult, LifshitzError> {
    check_radius(radius)?;
    let energy = plate_plate_free_energy(m_sphere, m_plate, d, grid, quad, policy)?;
    Ok(SpherePlateResult {
        value: 2.0 * PI * radius * energy,
        pfa_validity_warning: d / radius > PFA_VALIDITY_LIMIT,
    })
}

/// Sphere–plate force gradient ∂F/∂d = −2πR·P(d) under the PFA; positive
/// for attraction, so the magnitude equals 2πR·|P| as plotted per radius.
pub fn sphere_plate_force_gradient(
    radius: f64,
    d: f64,
    m_sphere: &LayeredMirror,
    m_plate: &LayeredMirror,
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
) -> Result<SpherePlateResult, LifshitzError> {
    check_radius(radius)?;
    let pressure = plate_plate_pressure(m_sphere, m_plate, d, grid, quad, policy)?;
    Ok(SpherePlateResult {
        value: -2.0 * PI * radius * pressure,
        pfa_validity_warning: d / radius > PFA_VALIDITY_LIMIT,
    })
}

/// Pressures on a separation grid, evaluated in parallel (order-stable).
pub fn pressure_curve(
    m1: &LayeredMirror,
    m2: &LayeredMirror,
    separations: &[f64],
    grid: &MatsubaraGrid,
    quad: &QuadratureSpec,
    policy: ZeroFrequencyPolicy,
) -> Result<Vec<f64>, LifshitzError> {
    separations
        .par_iter()
        .map(|&d| plate_plate_pressure(m1, m2, d, grid, quad, policy))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::HBAR;
    use crate::lifshitz::CutoffPolicy;
    use crate::materials::{DielectricModel, MaterialLibrary};

    fn ideal_pressure_t0(d: f64) -> f64 {
        -PI * PI * HBAR * SPEED_OF_LIGHT / (240.0 * d.powi(4))
    }

    fn ideal_energy_t0(d: f64) -> f64 {
        -PI * PI * HBAR * SPEED_OF_LIGHT / (720.0 * d.powi(3))
    }

    fn cryo_grid() -> MatsubaraGrid {
        // T = 1 K stands in for the T → 0 limit; the default 300 K-sized
        // term cap is far too small there, so raise it explicitly.
        MatsubaraGrid::new(
            1.0,
            CutoffPolicy {
                tail_fraction: 1e-8,
                max_terms: 400_000,
            },
        )
        .unwrap()
    }

    #[test]
    fn ideal_metal_pressure_matches_closed_form() {
        let m = LayeredMirror::ideal_metal();
        let d = 100e-9;
        let p = plate_plate_pressure(
            &m,
            &m,
            d,
            &cryo_grid(),
            &QuadratureSpec::default(),
            ZeroFrequencyPolicy::Drude,
        )
        .unwrap();
        let want = ideal_pressure_t0(d);
        let rel = ((p - want) / want).abs();
        assert!(rel < 5e-3, "P = {p:.6} Pa, want {want:.6} Pa, rel {rel:.2e}");
        assert!(p < 0.0);
    }

    #[test]
    fn ideal_metal_energy_matches_closed_form() {
        let m = LayeredMirror::ideal_metal();
        let d = 100e-9;
        let e = plate_plate_free_energy(
            &m,
            &m,
            d,
            &cryo_grid(),
            &QuadratureSpec::default(),
            ZeroFrequencyPolicy::Drude,
        )
        .unwrap();
        let want = ideal_energy_t0(d);
        let rel = ((e - want) / want).abs();
        assert!(rel < 5e-3, "E = {e:.4e}, want {want:.4e}, rel {rel:.2e}");
    }

    #[test]
    fn vacuum_mirror_gives_exactly_zero() {
        let v = LayeredMirror::half_space(DielectricModel::vacuum()).unwrap();
        let gold = LayeredMirror::half_space(
            MaterialLibrary::with_defaults().model("gold").unwrap().clone(),
        )
        .unwrap();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec::default();
        let p = plate_plate_pressure(&v, &gold, 100e-9, &grid, &quad, ZeroFrequencyPolicy::Drude)
            .unwrap();
        let e =
            plate_plate_free_energy(&v, &gold, 100e-9, &grid, &quad, ZeroFrequencyPolicy::Drude)
                .unwrap();
        assert_eq!(p, 0.0);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn energy_derivative_equals_negative_pressure() {
        let lib = MaterialLibrary::with_defaults();
        let gold = LayeredMirror::half_space(lib.model("gold").unwrap().clone()).unwrap();
        let ito = LayeredMirror::from_library(&lib, &[("ito", 190e-9)], "glass").unwrap();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec {
            base_nodes: 16,
            tolerance: 1e-8,
        };
        let d = 80e-9;
        let h = 1e-3 * d;
        let policy = ZeroFrequencyPolicy::Drude;
        let ep = plate_plate_free_energy(&gold, &ito, d + h, &grid, &quad, policy).unwrap();
        let em = plate_plate_free_energy(&gold, &ito, d - h, &grid, &quad, policy).unwrap();
        let p = plate_plate_pressure(&gold, &ito, d, &grid, &quad, policy).unwrap();
        let fd = (ep - em) / (2.0 * h);
        let rel = ((fd - (-p)) / p).abs();
        assert!(rel < 1e-3, "dE/dd = {fd:.6e}, -P = {:.6e}, rel {rel:.2e}", -p);
    }

    #[test]
    fn pfa_force_is_linear_in_radius() {
        let m = LayeredMirror::ideal_metal();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec::default();
        let policy = ZeroFrequencyPolicy::Drude;
        let f1 = sphere_plate_force(50e-6, 100e-9, &m, &m, &grid, &quad, policy).unwrap();
        let f2 = sphere_plate_force(100e-6, 100e-9, &m, &m, &grid, &quad, policy).unwrap();
        assert!(((f2.value - 2.0 * f1.value) / f2.value).abs() < 1e-12);
        assert!(f1.value < 0.0);
        assert!(!f1.pfa_validity_warning);
    }

    #[test]
    fn gradient_equals_scaled_pressure_and_flags_pfa() {
        let m = LayeredMirror::ideal_metal();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec::default();
        let policy = ZeroFrequencyPolicy::Drude;
        let d = 100e-9;
        let r = 100e-6;
        let p = plate_plate_pressure(&m, &m, d, &grid, &quad, policy).unwrap();
        let g = sphere_plate_force_gradient(r, d, &m, &m, &grid, &quad, policy).unwrap();
        assert_eq!(g.value, -2.0 * PI * r * p);
        assert!(g.value > 0.0);
        assert!(!g.pfa_validity_warning);

        let close = sphere_plate_force_gradient(1e-6, 100e-9, &m, &m, &grid, &quad, policy)
            .unwrap();
        assert!(close.pfa_validity_warning);
    }

    #[test]
    fn pressure_magnitude_decreases_with_separation() {
        let lib = MaterialLibrary::with_defaults();
        let gold = LayeredMirror::half_space(lib.model("gold").unwrap().clone()).unwrap();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec::default();
        let ds = [50e-9, 100e-9, 200e-9, 400e-9, 800e-9];
        let ps =
            pressure_curve(&gold, &gold, &ds, &grid, &quad, ZeroFrequencyPolicy::Drude).unwrap();
        for w in ps.windows(2) {
            assert!(w[0].abs() > w[1].abs());
        }
    }

    #[test]
    fn default_cap_rejects_cryogenic_temperatures() {
        let m = LayeredMirror::ideal_metal();
        let grid = MatsubaraGrid::at_temperature(1.0).unwrap();
        let err = plate_plate_pressure(
            &m,
            &m,
            100e-9,
            &grid,
            &QuadratureSpec::default(),
            ZeroFrequencyPolicy::Drude,
        )
        .unwrap_err();
        assert!(matches!(err, LifshitzError::MatsubaraNotConverged { .. }), "{err}");
    }

    #[test]
    fn separation_domain_is_enforced() {
        let m = LayeredMirror::ideal_metal();
        let grid = MatsubaraGrid::at_temperature(300.0).unwrap();
        let quad = QuadratureSpec::default();
        for bad in [0.0, 0.5e-9, 11e-6, -1.0] {
            assert!(plate_plate_pressure(&m, &m, bad, &grid, &quad, ZeroFrequencyPolicy::Drude)
                .is_err());
        }
    }
}
