//! Model parameters, operator symbols, potentials and named presets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spectral::Symbol;

/// Functional form of the dissipation operator `A₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A0Family {
    /// `ν(−Δ)^θ`
    Fractional,
    /// `−νΔ(I − α²Δ)⁻¹`
    Voigt,
}

impl FromStr for A0Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fractional" => Ok(Self::Fractional),
            "voight" | "voigt" => Ok(Self::Voigt),
            _ => Err(Error::InvalidParam(format!("unknown a0_family `{s}`"))),
        }
    }
}

/// Kind of order parameter coupled to the flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderParam {
    /// Pure fluid: `∂ₜu + A₀u + B₀(u,u) = g`.
    None,
    /// Allen–Cahn phase field `φ`.
    Scalar,
    /// Ericksen–Leslie director `d` with the given number of components.
    Vector(usize),
}

impl OrderParam {
    pub fn components(self) -> usize {
        match self {
            Self::None => 0,
            Self::Scalar => 1,
            Self::Vector(c) => c,
        }
    }
}

impl FromStr for OrderParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "scalar" => Ok(Self::Scalar),
            "vector" | "vector2" | "vector(2)" => Ok(Self::Vector(2)),
            "vector3" | "vector(3)" => Ok(Self::Vector(3)),
            _ => Err(Error::InvalidParam(format!("unknown order_param `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// Dissipation exponent, `θ ≥ 0`.
    pub theta: f64,
    /// Smoothing exponent of the advecting velocity `M = (I − α²Δ)^{−θ₁}`.
    pub theta1: f64,
    /// Smoothing exponent of the advected velocity `N = (I − α²Δ)^{−θ₂}`.
    pub theta2: f64,
    pub chi: bool,
    pub alpha: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub gamma3: f64,
    pub a0_family: A0Family,
    pub order_param: OrderParam,
    /// Relaxation rate of the director; vector mode only.
    pub el_gamma: f64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParam(what.to_string()));
        let finite = [
            self.theta,
            self.theta1,
            self.theta2,
            self.alpha,
            self.nu,
            self.epsilon,
            self.gamma3,
            self.el_gamma,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return bad("parameters must be finite");
        }
        if self.theta < 0.0 {
            return bad("theta must be >= 0");
        }
        if self.alpha <= 0.0 {
            return bad("alpha must be > 0");
        }
        if self.nu < 0.0 {
            return bad("nu must be >= 0");
        }
        if self.epsilon <= 0.0 {
            return bad("epsilon must be > 0");
        }
        if self.gamma3 <= 0.0 {
            return bad("gamma3 must be > 0");
        }
        if self.el_gamma <= 0.0 {
            return bad("el_gamma must be > 0");
        }
        if let OrderParam::Vector(c) = self.order_param {
            if c != 2 && c != 3 {
                return bad("vector order parameter needs 2 or 3 components");
            }
        }
        Ok(())
    }

    /// Rate multiplying `f` in the order-parameter equation: `ε⁻¹` for the
    /// Allen–Cahn field, `γ` for the director.
    pub fn reaction_rate(&self) -> f64 {
        match self.order_param {
            OrderParam::Vector(_) => self.el_gamma,
            _ => 1.0 / self.epsilon,
        }
    }

    /// Coefficient of `A₁` in the order-parameter equation.
    pub fn diffusion_rate(&self) -> f64 {
        match self.order_param {
            OrderParam::Vector(_) => self.el_gamma,
            _ => self.epsilon,
        }
    }
}

pub fn a0_symbol(p: &ModelParams) -> Symbol {
    let (nu, theta, alpha) = (p.nu, p.theta, p.alpha);
    match p.a0_family {
        A0Family::Fractional => Symbol::new(move |s: f64| {
            // 0^0 = 1 keeps θ = 0 a pure damping
            nu * s.powf(theta)
        }),
        A0Family::Voigt => Symbol::new(move |s| nu * s / (1.0 + alpha * alpha * s)),
    }
}

fn helmholtz_power(alpha: f64, exponent: f64) -> Symbol {
    if exponent == 0.0 {
        return Symbol::identity();
    }
    Symbol::new(move |s: f64| (1.0 + alpha * alpha * s).powf(-exponent))
}

pub fn m_symbol(p: &ModelParams) -> Symbol {
    helmholtz_power(p.alpha, p.theta1)
}

pub fn n_symbol(p: &ModelParams) -> Symbol {
    helmholtz_power(p.alpha, p.theta2)
}

/// Operator `E` in the kinetic energy `½⟨u, Eu⟩`: `N` without the
/// transpose term, `M` with it. These are the choices for which the
/// advective trilinear form vanishes identically.
pub fn energy_pairing_symbol(p: &ModelParams) -> Symbol {
    if p.chi {
        m_symbol(p)
    } else {
        n_symbol(p)
    }
}

/// `F(r) = γ₃(r² − 1)²`
pub fn potential_big_f(p: &ModelParams, r: f64) -> f64 {
    let w = r * r - 1.0;
    p.gamma3 * w * w
}

/// `f(r) = F′(r) = 4γ₃ r(r² − 1)`
pub fn potential_f(p: &ModelParams, r: f64) -> f64 {
    4.0 * p.gamma3 * r * (r * r - 1.0)
}

/// `f′(r) = 4γ₃(3r² − 1)`
pub fn potential_fprime(p: &ModelParams, r: f64) -> f64 {
    4.0 * p.gamma3 * (3.0 * r * r - 1.0)
}

/// `F(d) = γ₃(|d|² − 1)²` for a director `d`.
pub fn potential_big_f_vec(p: &ModelParams, d: &[f64]) -> f64 {
    let w = d.iter().map(|x| x * x).sum::<f64>() - 1.0;
    p.gamma3 * w * w
}

/// `f(d) = ∇_d F = 4γ₃(|d|² − 1) d`, written into `out`.
pub fn potential_f_vec(p: &ModelParams, d: &[f64], out: &mut [f64]) {
    let w = d.iter().map(|x| x * x).sum::<f64>() - 1.0;
    for (o, x) in out.iter_mut().zip(d) {
        *o = 4.0 * p.gamma3 * w * x;
    }
}

/// Named members of the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    NseAc,
    LerayAcAlpha,
    MlAcAlpha,
    SbmAc,
    NsvAc,
    NsAcAlpha,
    /// `M = (I − α²Δ)^{−θ₂}`, `N = I`, `A₀ = ν(−Δ)^θ`, `χ = 1`.
    NsAcAlphaLike { theta: f64, theta2: f64 },
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::NseAc,
        Preset::LerayAcAlpha,
        Preset::MlAcAlpha,
        Preset::SbmAc,
        Preset::NsvAc,
        Preset::NsAcAlpha,
        Preset::NsAcAlphaLike {
            theta: 1.0,
            theta2: 1.0,
        },
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::NseAc => "NSE-AC",
            Preset::LerayAcAlpha => "Leray-AC-alpha",
            Preset::MlAcAlpha => "ML-AC-alpha",
            Preset::SbmAc => "SBM-AC",
            Preset::NsvAc => "NSV-AC",
            Preset::NsAcAlpha => "NS-AC-alpha",
            Preset::NsAcAlphaLike { .. } => "NS-AC-alpha-like",
        }
    }

    /// Model parameters for this preset with scalar order parameter and
    /// `el_gamma = 1`.
    pub fn params(&self, alpha: f64, nu: f64, epsilon: f64, gamma3: f64) -> ModelParams {
        // (θ, θ₁, θ₂, χ)
        let (theta, theta1, theta2, chi) = match *self {
            Preset::NseAc => (1.0, 0.0, 0.0, false),
            Preset::LerayAcAlpha => (1.0, 1.0, 0.0, false),
            Preset::MlAcAlpha => (1.0, 0.0, 1.0, false),
            Preset::SbmAc => (1.0, 1.0, 1.0, false),
            Preset::NsvAc => (0.0, 1.0, 1.0, false),
            Preset::NsAcAlpha => (1.0, 1.0, 0.0, true),
            Preset::NsAcAlphaLike { theta, theta2 } => (theta, theta2, 0.0, true),
        };
        let a0_family = if *self == Preset::NsvAc {
            A0Family::Voigt
        } else {
            A0Family::Fractional
        };
        ModelParams {
            theta,
            theta1,
            theta2,
            chi,
            alpha,
            nu,
            epsilon,
            gamma3,
            a0_family,
            order_param: OrderParam::Scalar,
            el_gamma: 1.0,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('α', "alpha").to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "nse-ac" => Ok(Preset::NseAc),
            "leray-ac-alpha" => Ok(Preset::LerayAcAlpha),
            "ml-ac-alpha" => Ok(Preset::MlAcAlpha),
            "sbm-ac" => Ok(Preset::SbmAc),
            "nsv-ac" => Ok(Preset::NsvAc),
            "ns-ac-alpha" => Ok(Preset::NsAcAlpha),
            "ns-ac-alpha-like" => Ok(Preset::NsAcAlphaLike {
                theta: 1.0,
                theta2: 1.0,
            }),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

/// Convenience for `name.parse::<Preset>()?.params(..)`.
pub fn preset(name: &str, alpha: f64, nu: f64, epsilon: f64, gamma3: f64) -> Result<ModelParams> {
    let p = name.parse::<Preset>()?.params(alpha, nu, epsilon, gamma3);
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nse() -> ModelParams {
        Preset::NseAc.params(1.0, 1.0, 1.0, 1.0)
    }

    #[test]
    fn preset_rows() {
        let p = preset("NSV-AC", 0.5, 1.0, 0.1, 1.0).unwrap();
        assert_eq!((p.theta, p.theta1, p.theta2, p.chi), (0.0, 1.0, 1.0, false));
        assert_eq!(p.a0_family, A0Family::Voigt);

        let p = preset("Leray-AC-α", 0.5, 1.0, 0.1, 1.0).unwrap();
        assert_eq!((p.theta, p.theta1, p.theta2, p.chi), (1.0, 1.0, 0.0, false));
        assert_eq!(p.a0_family, A0Family::Fractional);

        // operator row M = S, N = I with the transpose term
        let p = preset("NS-AC-alpha", 0.5, 1.0, 0.1, 1.0).unwrap();
        assert_eq!((p.theta, p.theta1, p.theta2, p.chi), (1.0, 1.0, 0.0, true));

        let p = Preset::NsAcAlphaLike { theta: 0.5, theta2: 2.0 }.params(0.5, 1.0, 0.1, 1.0);
        assert_eq!((p.theta, p.theta1, p.theta2, p.chi), (0.5, 2.0, 0.0, true));

        assert!(matches!(preset("NSE-XYZ", 1.0, 1.0, 1.0, 1.0), Err(Error::UnknownPreset(_))));
        for pr in Preset::ALL {
            assert_eq!(pr.name().parse::<Preset>().unwrap().name(), pr.name());
        }
    }

    #[test]
    fn a0_examples() {
        let mut p = nse();
        assert_eq!(a0_symbol(&p).eval(4.0), 4.0);
        p.a0_family = A0Family::Voigt;
        assert_eq!(a0_symbol(&p).eval(1.0), 0.5);
        p.a0_family = A0Family::Fractional;
        p.theta = 0.0;
        p.nu = 0.3;
        let a0 = a0_symbol(&p);
        assert_eq!(a0.eval(0.0), 0.3);
        assert_eq!(a0.eval(17.0), 0.3);
    }

    #[test]
    fn filter_examples() {
        let mut p = nse();
        p.theta1 = 1.0;
        assert_eq!(m_symbol(&p).eval(1.0), 0.5);
        assert_eq!(n_symbol(&p).eval(123.0), 1.0);
        p.theta1 = -1.0;
        assert_eq!(m_symbol(&p).eval(3.0), 4.0);
    }

    #[test]
    fn pairing_rule() {
        let sbm = Preset::SbmAc.params(1.0, 1.0, 1.0, 1.0);
        let e = energy_pairing_symbol(&sbm);
        assert_eq!(e.eval(3.0), n_symbol(&sbm).eval(3.0));
        let nsa = Preset::NsAcAlpha.params(1.0, 1.0, 1.0, 1.0);
        assert_eq!(energy_pairing_symbol(&nsa).eval(1.0), 0.5);
        assert_eq!(energy_pairing_symbol(&nse()).eval(9.0), 1.0);
    }

    #[test]
    fn potential_examples() {
        let p = nse();
        assert_eq!(potential_big_f(&p, 0.0), 1.0);
        assert_eq!(potential_f(&p, 0.0), 0.0);
        assert_eq!(potential_f(&p, 2.0), 24.0);
        assert_eq!(potential_f(&p, 1.0), 0.0);
        assert_eq!(potential_f(&p, -1.0), 0.0);
        let mut out = [9.0; 2];
        potential_f_vec(&p, &[1.0, 0.0], &mut out);
        assert_eq!(out, [0.0, 0.0]);
        assert_eq!(potential_big_f_vec(&p, &[0.6, 0.8]), 0.0);
    }

    #[test]
    fn invariants_rejected() {
        let mut p = nse();
        p.theta = -1.0;
        assert!(p.validate().is_err());
        let mut p = nse();
        p.alpha = 0.0;
        assert!(p.validate().is_err());
        let mut p = nse();
        p.epsilon = -0.1;
        assert!(p.validate().is_err());
        let mut p = nse();
        p.order_param = OrderParam::Vector(4);
        assert!(p.validate().is_err());
    }

    proptest! {
        #[test]
        fn f_is_derivative_of_big_f(r in -3.0f64..3.0, g in 0.1f64..5.0) {
            let mut p = nse();
            p.gamma3 = g;
            let h = 1e-5;
            let fd = (potential_big_f(&p, r + h) - potential_big_f(&p, r - h)) / (2.0 * h);
            let f = potential_f(&p, r);
            prop_assert!((fd - f).abs() <= 1e-6 * f.abs().max(1.0));
            let fd2 = (potential_f(&p, r + h) - potential_f(&p, r - h)) / (2.0 * h);
            prop_assert!((fd2 - potential_fprime(&p, r)).abs() <= 1e-6 * fd2.abs().max(1.0));
        }

        #[test]
        fn vector_f_is_gradient(d0 in -2.0f64..2.0, d1 in -2.0f64..2.0, d2 in -2.0f64..2.0) {
            let p = nse();
            let d = [d0, d1, d2];
            let mut f = [0.0; 3];
            potential_f_vec(&p, &d, &mut f);
            let h = 1e-5;
            for i in 0..3 {
                let (mut a, mut b) = (d, d);
                a[i] += h;
                b[i] -= h;
                let fd = (potential_big_f_vec(&p, &a) - potential_big_f_vec(&p, &b)) / (2.0 * h);
                prop_assert!((fd - f[i]).abs() <= 1e-6 * f[i].abs().max(1.0));
            }
        }

        #[test]
        fn coercive_far_field(r in 2.0f64..50.0, sign in prop::bool::ANY) {
            let p = nse();
            let r = if sign { r } else { -r };
            prop_assert!(potential_fprime(&p, r) > 0.0);
        }
    }
}
