//! Fresnel reflection coefficients of layered mirrors on the imaginary
//! frequency axis.
//!
//! At ξ > 0 everything is real: with q² = k² + ξ²/c² in the gap and
//! k_m² = k² + ε_m(iξ)·ξ²/c² in medium m, the half-space coefficients are
//!
//!   r_TE = (q − k_m)/(q + k_m),   r_TM = (ε q − k_m)/(ε q + k_m),
//!
//! and finite films enter through the two-interface recursion
//!
//!   r = (r_top + r_below·e^(−2 k_layer t)) / (1 + r_top·r_below·e^(−2 k_layer t))
//!
//! applied bottom-up. The ξ = 0 term never goes through the general path;
//! it uses the explicit zero-frequency forms selected by the policy.

use super::{LayeredMirror, LifshitzError, ZeroFrequencyPolicy};
use crate::constants::SPEED_OF_LIGHT;
use crate::materials::DielectricModel;

/// Exponents beyond this give a propagation factor that is zero to f64.
const EXP_CLAMP: f64 = 745.0;

fn decay(arg: f64) -> f64 {
    if arg > EXP_CLAMP {
        0.0
    } else {
        (-arg).exp()
    }
}

/// Mirror response with permittivities frozen at one imaginary frequency.
#[derive(Debug, Clone)]
pub(crate) enum MirrorAtXi {
    Ideal,
    Stack {
        /// (ε(iξ), thickness) outermost first.
        layers: Vec<(f64, f64)>,
        substrate_eps: f64,
    },
}

impl MirrorAtXi {
    pub(crate) fn reflect(&self, xi: f64, k: f64) -> (f64, f64) {
        match self {
            MirrorAtXi::Ideal => (-1.0, 1.0),
            MirrorAtXi::Stack {
                layers,
                substrate_eps,
            } => {
                let xi_c = xi / SPEED_OF_LIGHT;
                let k2 = k * k;
                let kappa = |eps: f64| (k2 + eps * xi_c * xi_c).sqrt();
                let r_te = |ea: f64, eb: f64| {
                    let (ka, kb) = (kappa(ea), kappa(eb));
                    (ka - kb) / (ka + kb)
                };
                let r_tm = |ea: f64, eb: f64| {
                    let (ka, kb) = (kappa(ea), kappa(eb));
                    (eb * ka - ea * kb) / (eb * ka + ea * kb)
                };
                let combine = |top: f64, below: f64, phase: f64| {
                    (top + below * phase) / (1.0 + top * below * phase)
                };

                // ε of the medium above layer i (vacuum above layer 0).
                let eps_above = |i: usize| if i == 0 { 1.0 } else { layers[i - 1].0 };
                let n = layers.len();
                let mut te;
                let mut tm;
                if n == 0 {
                    te = r_te(1.0, *substrate_eps);
                    tm = r_tm(1.0, *substrate_eps);
                } else {
                    let (e_last, _) = layers[n - 1];
                    te = r_te(e_last, *substrate_eps);
                    tm = r_tm(e_last, *substrate_eps);
                    for i in (0..n).rev() {
                        let (e_i, t_i) = layers[i];
                        let phase = decay(2.0 * kappa(e_i) * t_i);
                        te = combine(r_te(eps_above(i), e_i), te, phase);
                        tm = combine(r_tm(eps_above(i), e_i), tm, phase);
                    }
                }
                (te, tm)
            }
        }
    }
}

/// Static (ξ = 0) description of one medium.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StaticMedium {
    Dielectric { eps0: f64 },
    Conductor { plasma: Option<f64> },
}

impl StaticMedium {
    fn of(model: &DielectricModel) -> StaticMedium {
        if model.is_conducting() {
            StaticMedium::Conductor {
                plasma: model.plasma_frequency(),
            }
        } else {
            StaticMedium::Dielectric {
                eps0: model.static_epsilon().unwrap_or(1.0),
            }
        }
    }
}

/// Mirror response for the l = 0 term under a given policy.
#[derive(Debug, Clone)]
pub(crate) enum MirrorAtZero {
    Ideal,
    Stack {
        policy: ZeroFrequencyPolicy,
        /// (medium, thickness) outermost first; substrate last with
        /// thickness ignored.
        media: Vec<(StaticMedium, f64)>,
    },
}

impl MirrorAtZero {
    pub(crate) fn reflect(&self, k: f64) -> (f64, f64) {
        match self {
            MirrorAtZero::Ideal => (-1.0, 1.0),
            MirrorAtZero::Stack { policy, media } => {
                let te = match policy {
                    ZeroFrequencyPolicy::Drude => 0.0,
                    ZeroFrequencyPolicy::Plasma => te_plasma(media, k),
                };
                (te, tm_static(media, k))
            }
        }
    }
}

/// TM at ξ = 0: electrostatic contrast (ε_b − ε_a)/(ε_b + ε_a) with
/// conductors acting as ε → ∞, attenuation e^(−2kt) through films.
fn tm_static(media: &[(StaticMedium, f64)], k: f64) -> f64 {
    let r_if = |a: StaticMedium, b: StaticMedium| match (a, b) {
        (StaticMedium::Dielectric { eps0: ea }, StaticMedium::Dielectric { eps0: eb }) => {
            (eb - ea) / (eb + ea)
        }
        (StaticMedium::Dielectric { .. }, StaticMedium::Conductor { .. }) => 1.0,
        (StaticMedium::Conductor { .. }, StaticMedium::Dielectric { .. }) => -1.0,
        (StaticMedium::Conductor { .. }, StaticMedium::Conductor { .. }) => 0.0,
    };
    recurse(media, k, |m| match m {
        StaticMedium::Dielectric { .. } | StaticMedium::Conductor { .. } => k,
    }, r_if)
}

/// TE at ξ = 0 under the plasma policy: conductors with an identifiable
/// plasma frequency keep k_m = √(k² + ω_p²/c²); everything else has
/// k_m = k and reflects nothing.
fn te_plasma(media: &[(StaticMedium, f64)], k: f64) -> f64 {
    let k_of = |m: StaticMedium| match m {
        StaticMedium::Conductor { plasma: Some(wp) } => {
            let wc = wp / SPEED_OF_LIGHT;
            (k * k + wc * wc).sqrt()
        }
        _ => k,
    };
    let r_if = |a: StaticMedium, b: StaticMedium| {
        let (ka, kb) = (k_of(a), k_of(b));
        (ka - kb) / (ka + kb)
    };
    recurse(media, k, k_of, r_if)
}

fn recurse(
    media: &[(StaticMedium, f64)],
    _k: f64,
    k_of: impl Fn(StaticMedium) -> f64,
    r_if: impl Fn(StaticMedium, StaticMedium) -> f64,
) -> f64 {
    let vacuum = StaticMedium::Dielectric { eps0: 1.0 };
    let above = |i: usize| if i == 0 { vacuum } else { media[i - 1].0 };
    let n = media.len() - 1; // film count; media[n] is the substrate
    let mut r = r_if(if n == 0 { vacuum } else { media[n - 1].0 }, media[n].0);
    for i in (0..n).rev() {
        let (m_i, t_i) = media[i];
        let phase = decay(2.0 * k_of(m_i) * t_i);
        let top = r_if(above(i), m_i);
        r = (top + r * phase) / (1.0 + top * r * phase);
    }
    r
}

/// Frozen per-frequency snapshots used by the engine (built once per
/// Matsubara index, reused across all wavevector nodes).
pub(crate) fn mirror_at_xi(mirror: &LayeredMirror, xi: f64) -> MirrorAtXi {
    match mirror.substrate_model() {
        None => MirrorAtXi::Ideal,
        Some(sub) => MirrorAtXi::Stack {
            layers: mirror
                .layers()
                .iter()
                .map(|l| (l.material.eval_unchecked(xi), l.thickness))
                .collect(),
            substrate_eps: sub.eval_unchecked(xi),
        },
    }
}

pub(crate) fn mirror_at_zero(mirror: &LayeredMirror, policy: ZeroFrequencyPolicy) -> MirrorAtZero {
    match mirror.substrate_model() {
        None => MirrorAtZero::Ideal,
        Some(sub) => {
            let mut media: Vec<(StaticMedium, f64)> = mirror
                .layers()
                .iter()
                .map(|l| (StaticMedium::of(&l.material), l.thickness))
                .collect();
            media.push((StaticMedium::of(sub), 0.0));
            MirrorAtZero::Stack { policy, media }
        }
    }
}

/// TE and TM reflection coefficients of `mirror` at imaginary frequency
/// `xi` ≥ 0 and transverse wavevector `k` > 0. `xi = 0` is served by the
/// explicit zero-frequency forms of `policy`.
pub fn reflection_coefficients(
    mirror: &LayeredMirror,
    xi: f64,
    k: f64,
    policy: ZeroFrequencyPolicy,
) -> Result<(f64, f64), LifshitzError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(LifshitzError::InvalidParameter(format!(
            "wavevector must be > 0, got {k}"
        )));
    }
    if !xi.is_finite() || xi < 0.0 {
        return Err(LifshitzError::InvalidParameter(format!(
            "imaginary frequency must be >= 0, got {xi}"
        )));
    }
    if xi == 0.0 {
        Ok(mirror_at_zero(mirror, policy).reflect(k))
    } else {
        Ok(mirror_at_xi(mirror, xi).reflect(xi, k))
    }
}
