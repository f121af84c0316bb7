//! Tabulation of the closed-form solution families.

use std::f64::consts::PI;

use serde::Serialize;

use hyperwind_core::families::{
    hamiltonian_plateau, hhm_hamiltonian_profile, HhmCnoidal, HhmSech, HhmSine, HsmBlowup, HsmElliptic, HsmSine,
    HsmTanh, PhaseClosedForm, PhaseRate, TravellingProfile,
};

use crate::table::Table;
use crate::CliError;

pub const FAMILIES: [&str; 9] = [
    "hhm-sine",
    "hhm-phase",
    "hhm-cnoidal",
    "hhm-sech",
    "hhm-hamiltonian-profile",
    "hsm-blowup",
    "hsm-sine",
    "hsm-elliptic",
    "hsm-tanh",
];

/// Family parameters and the sample range; unset values fall back to the
/// family's defaults or are reported missing.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct CatalogueParams {
    pub k: Option<f64>,
    pub v: Option<f64>,
    pub c: Option<f64>,
    pub winding: Option<i64>,
    pub xi0: Option<f64>,
    pub p0: Option<f64>,
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub p3: Option<f64>,
    pub b: Option<f64>,
    pub q: Option<f64>,
    pub rho: Option<f64>,
    pub r: Option<f64>,
    pub t0: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub n: Option<usize>,
}

fn need(value: Option<f64>, flag: &str, family: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("{family} needs --{flag}")))
}

fn samples(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 })
}

impl CatalogueParams {
    fn range(&self, a: f64, b: f64) -> Result<(f64, f64, usize), CliError> {
        let (a, b) = (self.xmin.unwrap_or(a), self.xmax.unwrap_or(b));
        let n = self.n.unwrap_or(201);
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(CliError::Usage("--xmin/--xmax must be finite".into()));
        }
        Ok((a, b, n))
    }
}

fn profile_table<F: TravellingProfile + PhaseRate>(f: &F, (a, b, n): (f64, f64, usize)) -> Table {
    let mut t = Table::new(&["xi", "p", "dp", "phase_rate"]);
    for xi in samples(a, b, n) {
        t.push(&[xi, f.p(xi), f.dp(xi), f.phase_rate(xi)]);
    }
    t
}

/// Evaluates `family` over the requested range.
pub fn tabulate(family: &str, p: &CatalogueParams) -> Result<Table, CliError> {
    match family {
        "hhm-sine" => {
            let f = HhmSine::new(need(p.k, "k", family)?, need(p.v, "v", family)?, p.winding.unwrap_or(1), p.xi0.unwrap_or(0.0))?;
            Ok(profile_table(&f, p.range(-PI, PI)?))
        }
        "hhm-phase" => {
            let f = PhaseClosedForm::new(need(p.k, "k", family)?, need(p.v, "v", family)?)?;
            let mut t = Table::new(&["xi", "g", "g_principal"]);
            for xi in samples_of(p.range(-PI, PI)?) {
                t.push(&[xi, f.lift(xi)?, f.principal(xi)]);
            }
            Ok(t)
        }
        "hhm-cnoidal" => {
            let f = HhmCnoidal::new(
                need(p.p1, "p1", family)?,
                need(p.p2, "p2", family)?,
                need(p.p3, "p3", family)?,
                p.xi0.unwrap_or(0.0),
            )?;
            Ok(profile_table(&f, p.range(-10.0, 10.0)?))
        }
        "hhm-sech" => {
            let f = HhmSech::new(p.p1.unwrap_or(0.0), p.p3.unwrap_or(-2.0), p.xi0.unwrap_or(0.0))?;
            let mut t = Table::new(&["xi", "p", "dp", "phase_rate", "density"]);
            for xi in samples_of(p.range(-10.0, 10.0)?) {
                t.push(&[xi, f.p(xi), f.dp(xi), f.phase_rate(xi), f.density(xi)]);
            }
            Ok(t)
        }
        "hhm-hamiltonian-profile" => {
            let plateau = hamiltonian_plateau();
            let mut t = Table::new(&["x", "value", "asymptote"]);
            for x in samples_of(p.range(-10.0, 10.0)?) {
                t.push(&[x, hhm_hamiltonian_profile(x), plateau]);
            }
            Ok(t)
        }
        "hsm-blowup" => {
            let f = HsmBlowup::new(p.winding.unwrap_or(1), need(p.rho, "rho", family)?, p.t0.unwrap_or(0.0))?;
            let t_star = f.blowup_time();
            let mut t = Table::new(&["t", "theta", "tanh_theta", "theta_t"]);
            for time in samples_of(p.range(f.t0, f.t0 + 0.99 * (t_star - f.t0))?) {
                t.push(&[time, f.theta(time)?, f.tanh_theta(time)?, f.theta_t(time)?]);
            }
            Ok(t)
        }
        "hsm-sine" => {
            let f = HsmSine::new(need(p.b, "b", family)?, p.winding.unwrap_or(1), p.xi0.unwrap_or(0.0))?;
            Ok(profile_table(&f, p.range(-PI, PI)?))
        }
        "hsm-elliptic" => {
            let f = HsmElliptic::from_reduced(
                need(p.q, "q", family)?,
                need(p.rho, "rho", family)?,
                p.v.unwrap_or(2.0),
                p.xi0.unwrap_or(0.0),
            )?;
            let mut t = Table::new(&["xi", "p", "dp"]);
            for xi in samples_of(p.range(-10.0, 10.0)?) {
                t.push(&[xi, f.p(xi), f.dp(xi)]);
            }
            Ok(t)
        }
        "hsm-tanh" => {
            let (p0, c, v) = (need(p.p0, "p0", family)?, need(p.c, "c", family)?, need(p.v, "v", family)?);
            let mut f = HsmTanh::new(p0, c, v, p.r.unwrap_or(0.0))?;
            f.xi0 = p.xi0.unwrap_or(0.0);
            let mut t = Table::new(&["xi", "p", "phase_rate"]);
            for xi in samples_of(p.range(-10.0, 10.0)?) {
                t.push(&[xi, f.p(xi), f.phase_rate(xi)]);
            }
            Ok(t)
        }
        other => Err(CliError::Usage(format!("unknown family {other:?} (one of {})", FAMILIES.join(", ")))),
    }
}

fn samples_of((a, b, n): (f64, f64, usize)) -> impl Iterator<Item = f64> {
    samples(a, b, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_amplitude_zero_is_constant() {
        let p = CatalogueParams { k: Some(1.0), v: Some(2.0), n: Some(5), ..Default::default() };
        let t = tabulate("hhm-sine", &p).unwrap();
        let text = t.render();
        for line in text.lines().skip(1) {
            let p: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(p, -2.0);
        }
    }

    #[test]
    fn elliptic_names_failed_inequality() {
        let p = CatalogueParams { q: Some(-2.0), rho: Some(0.1), ..Default::default() };
        let err = tabulate("hsm-elliptic", &p).unwrap_err();
        assert!(err.to_string().contains("2q > -(8rho^2+1)"), "{err}");
        assert_eq!(err.exit_code(), crate::ExitCode::Usage);
    }

    #[test]
    fn every_family_tabulates() {
        let p = CatalogueParams {
            k: Some(2.0),
            v: Some(2.0),
            c: Some(1.0),
            p0: Some(0.5),
            p1: Some(1.0),
            p2: Some(0.5),
            p3: Some(-1.0),
            b: Some(2.0),
            q: Some(-4.0),
            rho: Some(2.0),
            n: Some(11),
            ..Default::default()
        };
        for f in FAMILIES {
            let p = if f == "hsm-elliptic" { CatalogueParams { q: Some(-2.0), rho: Some(0.62), v: None, ..p.clone() } } else { p.clone() };
            match tabulate(f, &p) {
                Ok(t) => assert_eq!(t.rows(), 11, "{f}"),
                Err(e) => panic!("{f}: {e}"),
            }
        }
        assert!(tabulate("hhm-nothing", &p).is_err());
    }
}
