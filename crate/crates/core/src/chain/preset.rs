//! Model preset strings.
//!
//! ```text
//! plane_oriented | uniform | yule
//! pa:beta=<r>[,dg1=<int>,vg1=<int>,k0=<int>]
//! linear:alpha=<r>,k0=<int>
//! rpa:beta=<r>,gamma=<v:p;v:p...>,seed=<u64>[,dg1=..,vg1=..,k0=..]
//! ```

use super::{GammaPmf, GammaSequence, ModelSpec, Scalar, SlopeKind, SlopeSequence};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

fn fail(input: &str, reason: impl Into<String>) -> Error {
    Error::Preset {
        input: input.to_string(),
        reason: reason.into(),
    }
}

struct Params<'a> {
    input: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(input: &'a str, body: &'a str, allowed: &[&str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| fail(input, format!("expected key=value, got `{part}`")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(fail(input, format!("unknown key `{k}`")));
            }
            if map.insert(k, v.trim()).is_some() {
                return Err(fail(input, format!("duplicate key `{k}`")));
            }
        }
        Ok(Params { input, map })
    }

    fn scalar(&self, key: &str) -> Result<Option<Scalar>> {
        self.map
            .get(key)
            .map(|v| {
                Scalar::parse(v).ok_or_else(|| fail(self.input, format!("bad number for `{key}`")))
            })
            .transpose()
    }

    fn int(&self, key: &str) -> Result<Option<u64>> {
        self.map
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| fail(self.input, format!("bad integer for `{key}`")))
            })
            .transpose()
    }

    fn required_scalar(&self, key: &str) -> Result<Scalar> {
        self.scalar(key)?
            .ok_or_else(|| fail(self.input, format!("missing `{key}`")))
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        let (head, body) = trimmed.split_once(':').unwrap_or((trimmed, ""));
        let head = head.trim().to_ascii_lowercase().replace('-', "_");
        let wrap = |r: Result<ModelSpec>| {
            r.map_err(|e| match e {
                Error::InvalidModel(why) => fail(input, why),
                other => other,
            })
        };
        match head.as_str() {
            "plane_oriented" | "plane" => {
                let p = Params::parse(input, body, &["k0"])?;
                let k0 = p.int("k0")?.unwrap_or(1);
                wrap(ModelSpec::new(
                    SlopeSequence::new(SlopeKind::PlaneOriented),
                    k0,
                ))
            }
            "uniform" | "uniform_recursive" => {
                let p = Params::parse(input, body, &["k0"])?;
                let k0 = p.int("k0")?.unwrap_or(1);
                wrap(ModelSpec::new(
                    SlopeSequence::new(SlopeKind::UniformRecursive),
                    k0,
                ))
            }
            "yule" => {
                let p = Params::parse(input, body, &["k0"])?;
                let k0 = p.int("k0")?.unwrap_or(0);
                wrap(ModelSpec::new(SlopeSequence::new(SlopeKind::Yule), k0))
            }
            "linear" => {
                let p = Params::parse(input, body, &["alpha", "k0"])?;
                let alpha = p.required_scalar("alpha")?;
                let k0 = p.int("k0")?.ok_or_else(|| fail(input, "missing `k0`"))?;
                wrap(ModelSpec::linear(alpha, k0))
            }
            "pa" => {
                let p = Params::parse(input, body, &["beta", "dg1", "vg1", "k0"])?;
                let beta = p.required_scalar("beta")?;
                let dg1 = p.int("dg1")?.unwrap_or(2);
                let vg1 = p.int("vg1")?.unwrap_or(2);
                let k0 = p.int("k0")?.unwrap_or(2);
                wrap(ModelSpec::pref_attach_seeded(beta, dg1, vg1, k0))
            }
            "rpa" => {
                let p = Params::parse(input, body, &["beta", "gamma", "seed", "dg1", "vg1", "k0"])?;
                let beta = p.required_scalar("beta")?;
                let gamma = p
                    .map
                    .get("gamma")
                    .ok_or_else(|| fail(input, "missing `gamma`"))?;
                let pmf = GammaPmf::parse(gamma).map_err(|e| fail(input, e.to_string()))?;
                let seed = p
                    .int("seed")?
                    .ok_or_else(|| fail(input, "missing `seed`"))?;
                let dg1 = p.int("dg1")?.unwrap_or(2);
                let vg1 = p.int("vg1")?.unwrap_or(2);
                let k0 = p.int("k0")?.unwrap_or(2);
                wrap(ModelSpec::new(
                    SlopeSequence::new(SlopeKind::RandomizedPa {
                        beta,
                        seed_degree: dg1,
                        seed_vertices: vg1,
                        gamma: Arc::new(GammaSequence::new(pmf, seed)),
                    }),
                    k0,
                ))
            }
            _ => Err(fail(input, format!("unknown model `{head}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_presets() {
        let m: ModelSpec = "plane_oriented".parse().unwrap();
        assert_eq!((m.k0(), m.slope(3)), (1, 5.0));
        let m: ModelSpec = "uniform".parse().unwrap();
        assert_eq!((m.k0(), m.slope(3)), (1, 3.0));
        let m: ModelSpec = "yule".parse().unwrap();
        assert_eq!((m.k0(), m.slope(3)), (0, 1.5));
    }

    #[test]
    fn parameterized_presets() {
        let m: ModelSpec = "pa:beta=0".parse().unwrap();
        assert_eq!(m.slope(2), 4.0);
        let m: ModelSpec = "linear:alpha=3/2,k0=1".parse().unwrap();
        assert_eq!(m.alpha(), Scalar::ratio(3, 2));
        let m: ModelSpec = "rpa:beta=0,gamma=1:0.5;2:0.5,seed=7".parse().unwrap();
        assert_eq!(m.alpha(), Scalar::int(3));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "plane_oriented",
            "uniform",
            "yule",
            "pa:beta=1/2",
            "linear:alpha=2.5,k0=2",
            "rpa:beta=0,gamma=1:1/2;2:1/2,seed=7",
        ] {
            let m: ModelSpec = s.parse().unwrap();
            let again: ModelSpec = m.to_string().parse().unwrap();
            assert_eq!(again.to_string(), m.to_string());
            assert_eq!(again.slopes().values(40), m.slopes().values(40));
        }
    }

    #[test]
    fn errors_name_the_problem() {
        for bad in [
            "tree",
            "linear:alpha=2",
            "linear:alpha=x,k0=1",
            "pa:beta=-1",
            "pa:beta=0,foo=1",
            "rpa:beta=0,seed=1",
            "rpa:beta=0,gamma=1:0.3,seed=1",
        ] {
            let err = bad.parse::<ModelSpec>().unwrap_err();
            assert!(matches!(err, Error::Preset { .. }), "{bad}: {err}");
        }
    }
}
