//! Workload strings such as `aqft:n=100,k=8`, `adder:bits=33`,
//! `hubbard:lx=4,ly=4,steps=2`, `rsa` and `file:circuit.txt`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use qnexus_core::arch::ArchitectureSpec;
use qnexus_core::circuit::{
    default_aqft_truncation, generate_aqft, generate_cuccaro_adder, generate_fermi_hubbard_step, parse_text,
};
use qnexus_core::LogicalCircuit;

use crate::config::ConfigError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Workload {
    /// `k = None` derives the truncation from the processor's gate error.
    Aqft {
        n: u32,
        k: Option<u32>,
    },
    Adder {
        bits: u32,
    },
    Hubbard {
        lx: u32,
        ly: u32,
        steps: u32,
    },
    Rsa,
    File(PathBuf),
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workload::Aqft { n, k: Some(k) } => write!(f, "aqft:n={n},k={k}"),
            Workload::Aqft { n, k: None } => write!(f, "aqft:n={n}"),
            Workload::Adder { bits } => write!(f, "adder:bits={bits}"),
            Workload::Hubbard { lx, ly, steps } => write!(f, "hubbard:lx={lx},ly={ly},steps={steps}"),
            Workload::Rsa => f.write_str("rsa"),
            Workload::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

fn size_key(family: &str) -> Option<&'static str> {
    match family {
        "aqft" => Some("n"),
        "adder" => Some("bits"),
        "hubbard" => Some("lx"),
        _ => None,
    }
}

impl Workload {
    pub fn parse(s: &str) -> Result<Workload, ConfigError> {
        Workload::parse_sized(s, None)
    }

    /// Parses a workload whose size parameter (`n`, `bits` or `lx`) is
    /// supplied separately, as in a sweep.
    pub fn parse_sized(s: &str, size: Option<u32>) -> Result<Workload, ConfigError> {
        let fail = |msg: &str| ConfigError::Workload(s.to_string(), msg.to_string());
        let (family, rest) = s.split_once(':').unwrap_or((s, ""));
        if family == "file" {
            if rest.is_empty() || size.is_some() {
                return Err(fail("expected file:<path>"));
            }
            return Ok(Workload::File(PathBuf::from(rest)));
        }
        let mut params = BTreeMap::new();
        for item in rest.split(',').filter(|i| !i.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| fail("parameters are key=value"))?;
            let v: u32 = v.trim().parse().map_err(|_| fail("parameter values are non-negative integers"))?;
            if params.insert(k.trim().to_string(), v).is_some() {
                return Err(fail("repeated parameter"));
            }
        }
        if let Some(size) = size {
            let key = size_key(family).ok_or_else(|| fail("this workload has no size parameter"))?;
            if params.insert(key.to_string(), size).is_some() {
                return Err(fail("size parameter is set by the sweep"));
            }
        }
        let mut take = |key: &str, default: Option<u32>| {
            params.remove(key).or(default).ok_or_else(|| fail(&format!("missing `{key}`")))
        };
        let w = match family {
            "aqft" => Workload::Aqft { n: take("n", None)?, k: params.remove("k") },
            "adder" => Workload::Adder { bits: take("bits", None)? },
            "hubbard" => {
                let lx = take("lx", None)?;
                Workload::Hubbard { lx, ly: take("ly", Some(lx))?, steps: take("steps", Some(1))? }
            }
            "rsa" => Workload::Rsa,
            _ => return Err(fail("unknown workload; expected aqft, adder, hubbard, rsa or file")),
        };
        if let Some(extra) = params.keys().next() {
            return Err(fail(&format!("unknown parameter `{extra}`")));
        }
        Ok(w)
    }

    /// Builds the circuit for `spec`. The RSA workload has no single
    /// circuit and returns `None`.
    pub fn circuit(&self, spec: &ArchitectureSpec) -> Result<Option<LogicalCircuit>, ConfigError> {
        let fail = |msg: String| ConfigError::Workload(self.to_string(), msg);
        let c = match self {
            Workload::Aqft { n, k } => {
                let k = match k {
                    Some(k) => *k,
                    None => {
                        let eps = spec.qpu().ok().and_then(|m| m.qpu.as_ref()).map(|q| q.eps_2q);
                        default_aqft_truncation(eps.ok_or_else(|| fail("architecture has no QPU gate error".into()))?)
                    }
                };
                generate_aqft(*n, k)
            }
            Workload::Adder { bits } => generate_cuccaro_adder(*bits),
            Workload::Hubbard { lx, ly, steps } => generate_fermi_hubbard_step(*lx, *ly, *steps),
            Workload::Rsa => return Ok(None),
            Workload::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
                return parse_text(&text).map(Some).map_err(|e| fail(e.to_string()));
            }
        };
        c.map(Some).map_err(|e| fail(e.to_string()))
    }
}
