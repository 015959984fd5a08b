//! Model constants for the p,q-interacting collective spin model.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("key `{key}`: cannot parse `{value}`")]
    Parse { key: String, value: String },
    #[error("{0}")]
    Domain(String),
}

/// Number of sites sharing one bath in the local-dissipation equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StringLength {
    /// All spins couple to a single bath; equivalent to `N_s -> infinity`.
    Collective,
    Sites(u32),
}

impl fmt::Display for StringLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StringLength::Collective => f.write_str("collective"),
            StringLength::Sites(n) => write!(f, "{n}"),
        }
    }
}

/// Validated model constants. The rate combinations `delta_gamma` and
/// `bar_gamma` are derived on every call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    p: u32,
    q: u32,
    omega_z: T,
    omega_x: T,
    gamma_up: T,
    gamma_down: T,
    n_spins: Option<u32>,
    n_string: StringLength,
}

impl<T: Real> ModelParams<T> {
    pub fn new(
        p: u32,
        q: u32,
        omega_z: T,
        omega_x: T,
        gamma_up: T,
        gamma_down: T,
    ) -> Result<Self, ParamError> {
        let params = Self {
            p,
            q,
            omega_z,
            omega_x,
            gamma_up,
            gamma_down,
            n_spins: None,
            n_string: StringLength::Collective,
        };
        params.check()?;
        Ok(params)
    }

    /// Pure pumping (`delta_gamma > 0`) or pure decay (`delta_gamma < 0`), so
    /// that `bar_gamma = |delta_gamma|`.
    pub fn with_delta_gamma(
        p: u32,
        q: u32,
        omega_z: T,
        omega_x: T,
        delta_gamma: T,
    ) -> Result<Self, ParamError> {
        let (up, down) = if delta_gamma >= T::zero() {
            (delta_gamma, T::zero())
        } else {
            (T::zero(), -delta_gamma)
        };
        Self::new(p, q, omega_z, omega_x, up, down)
    }

    pub fn with_n_spins(mut self, n: u32) -> Result<Self, ParamError> {
        self.n_spins = Some(n);
        self.check()?;
        Ok(self)
    }

    pub fn with_string(mut self, n_string: StringLength) -> Result<Self, ParamError> {
        self.n_string = n_string;
        self.check()?;
        Ok(self)
    }

    /// Same model with new rates.
    pub fn with_rates(mut self, gamma_up: T, gamma_down: T) -> Result<Self, ParamError> {
        self.gamma_up = gamma_up;
        self.gamma_down = gamma_down;
        self.check()?;
        Ok(self)
    }

    pub fn with_ranks(mut self, p: u32, q: u32) -> Result<Self, ParamError> {
        self.p = p;
        self.q = q;
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), ParamError> {
        if self.p < 1 {
            return Err(ParamError::Domain(format!("p must be >= 1, got {}", self.p)));
        }
        if self.q < 1 {
            return Err(ParamError::Domain(format!("q must be >= 1, got {}", self.q)));
        }
        for (name, v) in [
            ("omega_z", self.omega_z),
            ("omega_x", self.omega_x),
            ("gamma_up", self.gamma_up),
            ("gamma_down", self.gamma_down),
        ] {
            if !v.is_finite() || v < T::zero() {
                return Err(ParamError::Domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if self.n_spins == Some(0) {
            return Err(ParamError::Domain("n_spins must be >= 1".into()));
        }
        match self.n_string {
            StringLength::Sites(0) => {
                return Err(ParamError::Domain("n_string must be >= 1".into()))
            }
            StringLength::Sites(ns) => {
                if let Some(n) = self.n_spins {
                    if ns > n {
                        return Err(ParamError::Domain(format!(
                            "n_string ({ns}) exceeds n_spins ({n})"
                        )));
                    }
                }
            }
            StringLength::Collective => {}
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn omega_z(&self) -> T {
        self.omega_z
    }
    pub fn omega_x(&self) -> T {
        self.omega_x
    }
    pub fn gamma_up(&self) -> T {
        self.gamma_up
    }
    pub fn gamma_down(&self) -> T {
        self.gamma_down
    }
    pub fn n_spins(&self) -> Option<u32> {
        self.n_spins
    }
    pub fn n_string(&self) -> StringLength {
        self.n_string
    }

    /// `gamma_up - gamma_down`
    pub fn delta_gamma(&self) -> T {
        self.gamma_up - self.gamma_down
    }

    /// `gamma_up + gamma_down`
    pub fn bar_gamma(&self) -> T {
        self.gamma_up + self.gamma_down
    }

    /// Largest model frequency, used to scale classification tolerances.
    pub fn frequency_scale(&self) -> T {
        self.omega_z.max(self.omega_x).max(self.delta_gamma().abs())
    }

    /// Converts to the raw key-value form accepted by [`validate_params`].
    pub fn to_raw(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("p".into(), self.p.to_string());
        m.insert("q".into(), self.q.to_string());
        m.insert("omega_z".into(), format!("{:e}", self.omega_z.as_f64()));
        m.insert("omega_x".into(), format!("{:e}", self.omega_x.as_f64()));
        m.insert("gamma_up".into(), format!("{:e}", self.gamma_up.as_f64()));
        m.insert("gamma_down".into(), format!("{:e}", self.gamma_down.as_f64()));
        if let Some(n) = self.n_spins {
            m.insert("n_spins".into(), n.to_string());
        }
        m.insert("n_string".into(), self.n_string.to_string());
        m
    }

    /// Lossy conversion to another scalar type.
    pub fn cast<U: Real>(&self) -> ModelParams<U> {
        ModelParams {
            p: self.p,
            q: self.q,
            omega_z: U::lit(self.omega_z.as_f64()),
            omega_x: U::lit(self.omega_x.as_f64()),
            gamma_up: U::lit(self.gamma_up.as_f64()),
            gamma_down: U::lit(self.gamma_down.as_f64()),
            n_spins: self.n_spins,
            n_string: self.n_string,
        }
    }
}

fn get<'a, S: AsRef<str>>(
    raw: &'a BTreeMap<String, S>,
    key: &'static str,
) -> Result<&'a str, ParamError> {
    raw.get(key)
        .map(|v| v.as_ref().trim())
        .ok_or(ParamError::MissingKey(key))
}

fn parse<V: std::str::FromStr>(key: &str, value: &str) -> Result<V, ParamError> {
    value.parse().map_err(|_| ParamError::Parse {
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_rank(key: &'static str, value: &str) -> Result<u32, ParamError> {
    // negative ranks are a domain error, not a parse error
    let v: i64 = parse(key, value)?;
    if v < 1 {
        return Err(ParamError::Domain(format!("{key} must be >= 1, got {v}")));
    }
    u32::try_from(v).map_err(|_| ParamError::Domain(format!("{key} too large: {v}")))
}

/// Builds validated parameters from a raw key-value map.
///
/// Required keys: `p`, `q`, `omega_z`, `omega_x`, `gamma_up`, `gamma_down`.
/// Optional: `n_spins` (positive integer) and `n_string` (positive integer or
/// `collective`, the default).
pub fn validate_params<T: Real, S: AsRef<str>>(
    raw: &BTreeMap<String, S>,
) -> Result<ModelParams<T>, ParamError> {
    let p = parse_rank("p", get(raw, "p")?)?;
    let q = parse_rank("q", get(raw, "q")?)?;
    let real = |key: &'static str| -> Result<T, ParamError> {
        let v: f64 = parse(key, get(raw, key)?)?;
        Ok(T::lit(v))
    };
    let omega_z = real("omega_z")?;
    let omega_x = real("omega_x")?;
    let gamma_up = real("gamma_up")?;
    let gamma_down = real("gamma_down")?;
    let mut params = ModelParams::new(p, q, omega_z, omega_x, gamma_up, gamma_down)?;
    if let Some(n) = raw.get("n_spins") {
        let n: i64 = parse("n_spins", n.as_ref().trim())?;
        if n < 1 {
            return Err(ParamError::Domain(format!("n_spins must be >= 1, got {n}")));
        }
        params.n_spins = Some(n as u32);
    }
    if let Some(s) = raw.get("n_string") {
        let s = s.as_ref().trim();
        params.n_string = if s.eq_ignore_ascii_case("collective") {
            StringLength::Collective
        } else {
            let n: i64 = parse("n_string", s)?;
            if n < 1 {
                return Err(ParamError::Domain(format!("n_string must be >= 1, got {n}")));
            }
            StringLength::Sites(n as u32)
        };
    }
    params.check()?;
    Ok(params)
}
