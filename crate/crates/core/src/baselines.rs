//! Baseline distribution registry.
//!
//! A baseline is the survival distribution of a zero-covariate subject; every
//! regression family perturbs one. Each distribution exposes the upper-tail
//! quantile (the t with S(t) = p), survival, hazard and the odds function
//! R(t) = (1 - S(t)) / S(t). Generation flows entirely through the
//! upper-tail quantile, so any distribution with an invertible survival
//! function can be plugged in — closed-form quantiles where they exist,
//! safeguarded Newton/bisection on S(t) - p otherwise.
//!
//! Built-ins: `exp`, `weibull`, `llogis`, `lnorm`, `gompertz`, `gengamma`.
//! The Gompertz here has cumulative hazard H(t) = (rate/shape)(e^{shape t} - 1);
//! `gengamma` is the original generalized-gamma parameterization with density
//! proportional to t^{shape*k - 1} exp(-(t/scale)^shape).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special;

/// Named distribution plus its parameter vector, as written in scenario files.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BaselineSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl BaselineSpec {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        BaselineSpec {
            name: name.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }
}

/// A baseline survival distribution. Immutable once constructed; safe to
/// share across workers.
pub trait BaselineDistribution: Send + Sync + fmt::Debug {
    /// S(t) for t >= 0. S(0) = 1, non-increasing, limit 0.
    fn survival(&self, t: f64) -> Result<f64>;

    /// The t with S(t) = p, for p in (0, 1). Strictly decreasing in p.
    fn quantile_upper(&self, p: f64) -> Result<f64>;

    /// Hazard h(t) = f(t) / S(t).
    fn hazard(&self, t: f64) -> Result<f64>;

    /// Odds R(t) = (1 - S(t)) / S(t); 0 at t = 0, non-decreasing.
    fn odds(&self, t: f64) -> Result<f64> {
        let s = self.survival(t)?;
        if s <= 0.0 {
            return Err(Error::domain(format!(
                "odds undefined: survival is 0 within floating precision at t = {t}"
            )));
        }
        Ok((1.0 - s) / s)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("time must be >= 0, got {t}")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "quantile probability must be in (0, 1), got {p}"
        )));
    }
    Ok(())
}

/// Safeguarded Newton with an expanding bracket, for distributions without a
/// closed-form quantile. Solves S(t) = p to 1e-12 in p.
pub fn invert_survival(dist: &dyn BaselineDistribution, p: f64) -> Result<f64> {
    check_p(p)?;
    // Expand [0, hi] until S(hi) < p.
    let mut hi = 1.0;
    let mut k = 0;
    while dist.survival(hi)? >= p {
        hi *= 2.0;
        k += 1;
        if k > 1100 {
            return Err(Error::domain(format!(
                "survival inversion bracket did not close for p = {p}"
            )));
        }
    }
    let mut lo = 0.0;
    let mut t = 0.5 * hi;
    for _ in 0..200 {
        let s = dist.survival(t)?;
        if (s - p).abs() < 1e-12 {
            return Ok(t);
        }
        if s > p {
            lo = t;
        } else {
            hi = t;
        }
        // Newton using S' = -h * S, falling back to bisection when the step
        // leaves the bracket or the derivative degenerates.
        let f = dist.hazard(t)? * s;
        let next = t + (s - p) / f;
        t = if f > 0.0 && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(t)
}

fn param(
    params: &BTreeMap<String, f64>,
    dist: &str,
    name: &str,
) -> Result<f64> {
    params.get(name).copied().ok_or_else(|| Error::InvalidParameter {
        context: dist.to_string(),
        name: name.to_string(),
        message: "required parameter missing".to_string(),
    })
}

fn positive(dist: &str, name: &str, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::InvalidParameter {
            context: dist.to_string(),
            name: name.to_string(),
            message: format!("must be > 0, got {v}"),
        });
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        Ok(Exponential {
            rate: positive("exp", "rate", rate)?,
        })
    }
}

impl BaselineDistribution for Exponential {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok((-self.rate * t).exp())
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(-p.ln() / self.rate)
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.rate)
    }
}

#[derive(Debug, Clone)]
pub struct Weibull {
    shape: f64,
    scale: f64,
}

impl Weibull {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        Ok(Weibull {
            shape: positive("weibull", "shape", shape)?,
            scale: positive("weibull", "scale", scale)?,
        })
    }
}

impl BaselineDistribution for Weibull {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok((-(t / self.scale).powf(self.shape)).exp())
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(self.scale * (-p.ln()).powf(1.0 / self.shape))
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.shape / self.scale * (t / self.scale).powf(self.shape - 1.0))
    }
}

/// Log-logistic with S(t) = 1 / (1 + (t/scale)^shape); the median is `scale`.
#[derive(Debug, Clone)]
pub struct LogLogistic {
    shape: f64,
    scale: f64,
}

impl LogLogistic {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        Ok(LogLogistic {
            shape: positive("llogis", "shape", shape)?,
            scale: positive("llogis", "scale", scale)?,
        })
    }
}

impl BaselineDistribution for LogLogistic {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(1.0 / (1.0 + (t / self.scale).powf(self.shape)))
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(self.scale * (1.0 / p - 1.0).powf(1.0 / self.shape))
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let z = (t / self.scale).powf(self.shape - 1.0);
        Ok(self.shape / self.scale * z / (1.0 + z * (t / self.scale)))
    }

    fn odds(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        // (1 - S)/S collapses to the closed form (t/scale)^shape.
        Ok((t / self.scale).powf(self.shape))
    }
}

#[derive(Debug, Clone)]
pub struct LogNormal {
    meanlog: f64,
    sdlog: f64,
}

impl LogNormal {
    pub fn new(meanlog: f64, sdlog: f64) -> Result<Self> {
        Ok(LogNormal {
            meanlog,
            sdlog: positive("lnorm", "sdlog", sdlog)?,
        })
    }

    fn z(&self, t: f64) -> f64 {
        (t.ln() - self.meanlog) / self.sdlog
    }
}

impl BaselineDistribution for LogNormal {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(1.0);
        }
        Ok(special::norm_sf(self.z(t)))
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        // S(t) = p  <=>  (ln t - meanlog)/sdlog = Phi^{-1}(1 - p) = -Phi^{-1}(p)
        Ok((self.meanlog - self.sdlog * special::norm_quantile(p)).exp())
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let z = self.z(t);
        Ok(special::norm_pdf(z) / (self.sdlog * t * special::norm_sf(z)))
    }
}

/// Gompertz with H(t) = (rate/shape)(e^{shape t} - 1).
#[derive(Debug, Clone)]
pub struct Gompertz {
    shape: f64,
    rate: f64,
}

impl Gompertz {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        Ok(Gompertz {
            shape: positive("gompertz", "shape", shape)?,
            rate: positive("gompertz", "rate", rate)?,
        })
    }
}

impl BaselineDistribution for Gompertz {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok((-(self.rate / self.shape) * ((self.shape * t).exp() - 1.0)).exp())
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok((1.0 - self.shape * p.ln() / self.rate).ln() / self.shape)
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self.rate * (self.shape * t).exp())
    }
}

/// Generalized gamma, original parameterization: density proportional to
/// t^{shape*k - 1} exp(-(t/scale)^shape). Reduces to the exponential when
/// shape = scale = k = 1. The quantile has no closed form and goes through
/// the generic survival inverter.
#[derive(Debug, Clone)]
pub struct GenGamma {
    shape: f64,
    scale: f64,
    k: f64,
}

impl GenGamma {
    pub fn new(shape: f64, scale: f64, k: f64) -> Result<Self> {
        Ok(GenGamma {
            shape: positive("gengamma", "shape", shape)?,
            scale: positive("gengamma", "scale", scale)?,
            k: positive("gengamma", "k", k)?,
        })
    }
}

impl BaselineDistribution for GenGamma {
    fn survival(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(1.0);
        }
        Ok(special::gamma_q(self.k, (t / self.scale).powf(self.shape)))
    }

    fn quantile_upper(&self, p: f64) -> Result<f64> {
        invert_survival(self, p)
    }

    fn hazard(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            // Limit: 0 when shape*k > 1, +inf when < 1, rate-like when = 1.
            let skm1 = self.shape * self.k - 1.0;
            return Ok(if skm1 > 0.0 {
                0.0
            } else if skm1 == 0.0 {
                self.shape / self.scale / special::ln_gamma(self.k).exp()
            } else {
                f64::INFINITY
            });
        }
        let s = self.survival(t)?;
        if s <= 0.0 {
            return Err(Error::domain(format!(
                "hazard undefined: survival is 0 at t = {t}"
            )));
        }
        let ln_f = self.shape.ln() - self.scale.ln() - special::ln_gamma(self.k)
            + (self.shape * self.k - 1.0) * (t / self.scale).ln()
            - (t / self.scale).powf(self.shape);
        Ok(ln_f.exp() / s)
    }
}

type Constructor =
    Box<dyn Fn(&BTreeMap<String, f64>) -> Result<Arc<dyn BaselineDistribution>> + Send + Sync>;

/// Name -> constructor registry. Frozen after startup in normal use; tests
/// and embedders may register extra distributions before handing it to the
/// engine.
pub struct BaselineRegistry {
    constructors: BTreeMap<String, Constructor>,
}

impl fmt::Debug for BaselineRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaselineRegistry")
            .field("names", &self.known_names())
            .finish()
    }
}

impl BaselineRegistry {
    /// Empty registry with no distributions.
    pub fn empty() -> Self {
        BaselineRegistry {
            constructors: BTreeMap::new(),
        }
    }

    /// Registry with the built-in distributions.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("exp", |p| {
            Ok(Arc::new(Exponential::new(param(p, "exp", "rate")?)?) as _)
        })
        .unwrap();
        reg.register("weibull", |p| {
            Ok(Arc::new(Weibull::new(
                param(p, "weibull", "shape")?,
                param(p, "weibull", "scale")?,
            )?) as _)
        })
        .unwrap();
        reg.register("llogis", |p| {
            Ok(Arc::new(LogLogistic::new(
                param(p, "llogis", "shape")?,
                param(p, "llogis", "scale")?,
            )?) as _)
        })
        .unwrap();
        reg.register("lnorm", |p| {
            Ok(Arc::new(LogNormal::new(
                param(p, "lnorm", "meanlog")?,
                param(p, "lnorm", "sdlog")?,
            )?) as _)
        })
        .unwrap();
        reg.register("gompertz", |p| {
            Ok(Arc::new(Gompertz::new(
                param(p, "gompertz", "shape")?,
                param(p, "gompertz", "rate")?,
            )?) as _)
        })
        .unwrap();
        reg.register("gengamma", |p| {
            Ok(Arc::new(GenGamma::new(
                param(p, "gengamma", "shape")?,
                param(p, "gengamma", "scale")?,
                param(p, "gengamma", "k")?,
            )?) as _)
        })
        .unwrap();
        reg
    }

    /// Register a distribution constructor under a unique name.
    pub fn register<F>(&mut self, name: &str, ctor: F) -> Result<()>
    where
        F: Fn(&BTreeMap<String, f64>) -> Result<Arc<dyn BaselineDistribution>>
            + Send
            + Sync
            + 'static,
    {
        if self.constructors.contains_key(name) {
            return Err(Error::DuplicateBaseline {
                name: name.to_string(),
            });
        }
        self.constructors.insert(name.to_string(), Box::new(ctor));
        Ok(())
    }

    /// Construct a distribution by name. Unknown names report the full list
    /// of registered ones.
    pub fn lookup(
        &self,
        name: &str,
        params: &BTreeMap<String, f64>,
    ) -> Result<Arc<dyn BaselineDistribution>> {
        match self.constructors.get(name) {
            Some(ctor) => ctor(params),
            None => Err(Error::UnknownBaseline {
                name: name.to_string(),
                known: self.known_names().join(", "),
            }),
        }
    }

    pub fn lookup_spec(&self, spec: &BaselineSpec) -> Result<Arc<dyn BaselineDistribution>> {
        self.lookup(&spec.name, &spec.params)
    }

    pub fn known_names(&self) -> Vec<String> {
        self.constructors.keys().cloned().collect()
    }
}

impl Default for BaselineRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(name: &str, params: &[(&str, f64)]) -> Arc<dyn BaselineDistribution> {
        let spec = BaselineSpec::new(name, params);
        BaselineRegistry::with_builtins().lookup_spec(&spec).unwrap()
    }

    fn all_builtins() -> Vec<(&'static str, Arc<dyn BaselineDistribution>)> {
        vec![
            ("exp", builtin("exp", &[("rate", 0.8)])),
            ("weibull", builtin("weibull", &[("shape", 1.5), ("scale", 2.0)])),
            ("llogis", builtin("llogis", &[("shape", 2.5), ("scale", 1.3)])),
            ("lnorm", builtin("lnorm", &[("meanlog", 0.2), ("sdlog", 0.7)])),
            ("gompertz", builtin("gompertz", &[("shape", 0.6), ("rate", 0.4)])),
            ("gengamma", builtin("gengamma", &[("shape", 1.4), ("scale", 1.1), ("k", 2.0)])),
        ]
    }

    #[test]
    fn closed_form_quantiles() {
        let e = builtin("exp", &[("rate", 1.0)]);
        assert!((e.quantile_upper((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-12);

        for &k in &[0.5, 1.0, 3.2] {
            let w = builtin("weibull", &[("shape", k), ("scale", 1.7)]);
            assert!((w.quantile_upper((-1.0f64).exp()).unwrap() - 1.7).abs() < 1e-12);
        }

        let ll = builtin("llogis", &[("shape", 1.5), ("scale", 1.0)]);
        assert!((ll.quantile_upper(0.5).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn survival_reference_points() {
        let e = builtin("exp", &[("rate", 2.0)]);
        assert_eq!(e.survival(0.0).unwrap(), 1.0);

        let w = builtin("weibull", &[("shape", 1.5), ("scale", 1.0)]);
        assert!((w.survival(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn odds_reference_points() {
        for (_, d) in all_builtins() {
            assert_eq!(d.odds(0.0).unwrap(), 0.0);
        }
        let e = builtin("exp", &[("rate", 1.0)]);
        assert!((e.odds(2.0f64.ln()).unwrap() - 1.0).abs() < 1e-12);

        let ll = builtin("llogis", &[("shape", 2.0), ("scale", 1.4)]);
        assert!((ll.odds(1.4).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_on_centile_grid() {
        // quantile_upper(survival) and survival(quantile_upper) across all
        // built-ins on the 99 centiles.
        for (name, d) in all_builtins() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let t = d.quantile_upper(p).unwrap();
                let s = d.survival(t).unwrap();
                assert!(
                    (s - p).abs() < 1e-8,
                    "{name}: S(Q({p})) = {s}"
                );
            }
        }
    }

    #[test]
    fn quantile_strictly_decreasing() {
        for (name, d) in all_builtins() {
            let mut prev = f64::INFINITY;
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let t = d.quantile_upper(p).unwrap();
                assert!(t < prev, "{name}: quantile not decreasing at p = {p}");
                prev = t;
            }
        }
    }

    #[test]
    fn hazard_matches_log_survival_derivative() {
        // h(t) = -d/dt log S(t), checked by central finite differences.
        for (name, d) in all_builtins() {
            for j in 1..=20 {
                let t = 0.15 * j as f64;
                let h = 1e-5 * t.max(1.0);
                let ls1 = d.survival(t - h).unwrap().ln();
                let ls2 = d.survival(t + h).unwrap().ln();
                let fd = -(ls2 - ls1) / (2.0 * h);
                let hz = d.hazard(t).unwrap();
                let rel = (hz - fd).abs() / fd.abs().max(1e-12);
                assert!(
                    rel < 1e-4,
                    "{name}: hazard {hz} vs finite diff {fd} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn registry_lookup_and_alias() {
        let mut reg = BaselineRegistry::with_builtins();
        assert!(reg.lookup("exp", &BaselineSpec::new("exp", &[("rate", 1.0)]).params).is_ok());

        // An alias registered under a new name behaves identically.
        reg.register("mydist", |p| {
            Ok(Arc::new(Exponential::new(param(p, "mydist", "lambda")?)?) as _)
        })
        .unwrap();
        let a = reg
            .lookup("exp", &BaselineSpec::new("exp", &[("rate", 1.0)]).params)
            .unwrap();
        let b = reg
            .lookup("mydist", &BaselineSpec::new("mydist", &[("lambda", 1.0)]).params)
            .unwrap();
        for i in 1..20 {
            let p = i as f64 / 20.0;
            assert_eq!(a.quantile_upper(p).unwrap(), b.quantile_upper(p).unwrap());
        }

        match reg.lookup("nosuch", &BTreeMap::new()) {
            Err(Error::UnknownBaseline { known, .. }) => {
                assert!(known.contains("exp") && known.contains("weibull"));
            }
            other => panic!("expected UnknownBaseline, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_registration_rejected() {
        let mut reg = BaselineRegistry::with_builtins();
        let err = reg.register("exp", |_| unreachable!());
        assert!(matches!(err, Err(Error::DuplicateBaseline { .. })));
    }

    #[test]
    fn invalid_params_rejected() {
        let reg = BaselineRegistry::with_builtins();
        assert!(reg
            .lookup("exp", &BaselineSpec::new("exp", &[("rate", -1.0)]).params)
            .is_err());
        assert!(reg
            .lookup("weibull", &BaselineSpec::new("weibull", &[("shape", 1.0)]).params)
            .is_err());
        assert!(reg
            .lookup("lnorm", &BaselineSpec::new("lnorm", &[("meanlog", 0.0), ("sdlog", 0.0)]).params)
            .is_err());
    }

    #[test]
    fn domain_errors() {
        let e = builtin("exp", &[("rate", 1.0)]);
        assert!(e.survival(-0.1).is_err());
        assert!(e.quantile_upper(0.0).is_err());
        assert!(e.quantile_upper(1.0).is_err());
    }

    #[test]
    fn gengamma_with_unit_params_is_exponential() {
        let g = builtin("gengamma", &[("shape", 1.0), ("scale", 1.0), ("k", 1.0)]);
        let e = builtin("exp", &[("rate", 1.0)]);
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let tg = g.quantile_upper(p).unwrap();
            let te = e.quantile_upper(p).unwrap();
            assert!((tg - te).abs() < 1e-9, "p={p}: {tg} vs {te}");
        }
    }
}
