//! Approximation functions from the command line:
//!
//! - `const:V` on `[1, N]`, or `const:V@A..B`
//! - `inv:C@A..B` for `psi(n) = C/n`
//! - `list:n=v,n=v,...`
//! - `ds:k:a:b:full|refined`, the Duffin–Schaeffer block on primes in `[a, b)`

use dslab_core::dsgen::{build_family, Variant};
use dslab_core::intervals::SupportFunction;
use dslab_core::rational::{self, Rational};

use crate::CliError;

fn usage(spec: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("psi `{spec}`: {why}"))
}

fn range(spec: &str, tail: Option<&str>, default_hi: Option<u64>) -> Result<(u64, u64), CliError> {
    match tail {
        Some(r) => {
            let (a, b) = r.split_once("..").ok_or_else(|| usage(spec, "range must be A..B"))?;
            let a = a.trim().parse().map_err(|_| usage(spec, "bad range start"))?;
            let b = b.trim().parse().map_err(|_| usage(spec, "bad range end"))?;
            if a == 0 || a > b {
                return Err(usage(spec, "range must satisfy 1 <= A <= B"));
            }
            Ok((a, b))
        }
        None => default_hi
            .map(|hi| (1, hi))
            .ok_or_else(|| usage(spec, "needs an explicit @A..B range here")),
    }
}

fn value(spec: &str, s: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|e| usage(spec, e))
}

/// `default_hi` fills in the range of `const:V` when the command has an `N`.
pub fn parse_psi(spec: &str, default_hi: Option<u64>) -> Result<SupportFunction, CliError> {
    let (kind, body) = spec.split_once(':').ok_or_else(|| usage(spec, "expected KIND:..."))?;
    let built = match kind {
        "const" | "inv" => {
            let (v, tail) = match body.split_once('@') {
                Some((v, r)) => (v, Some(r)),
                None => (body, None),
            };
            let v = value(spec, v)?;
            if kind == "inv" && tail.is_none() {
                return Err(usage(spec, "inv needs @A..B"));
            }
            let (a, b) = range(spec, tail, default_hi)?;
            if kind == "const" {
                SupportFunction::constant(v, a, b)
            } else {
                SupportFunction::inverse(v, a, b)
            }
        }
        "list" => {
            let mut pairs = Vec::new();
            for item in body.split(',').filter(|s| !s.trim().is_empty()) {
                let (n, v) = item.split_once('=').ok_or_else(|| usage(spec, "list entries are n=v"))?;
                let n: u64 = n.trim().parse().map_err(|_| usage(spec, format!("bad index `{n}`")))?;
                pairs.push((n, value(spec, v)?));
            }
            SupportFunction::from_pairs(pairs)
        }
        "ds" => {
            let parts: Vec<&str> = body.split(':').collect();
            let [k, a, b, variant] = parts[..] else {
                return Err(usage(spec, "expected ds:k:a:b:variant"));
            };
            let num = |s: &str| s.parse::<u64>().map_err(|_| usage(spec, format!("bad number `{s}`")));
            let variant: Variant = variant.parse().map_err(|e| usage(spec, e))?;
            let k = u32::try_from(num(k)?).map_err(|_| usage(spec, "k too large"))?;
            let fam = build_family(k, num(a)?, num(b)?, variant).map_err(|e| usage(spec, e))?;
            return Ok(fam.psi);
        }
        other => return Err(usage(spec, format!("unknown kind `{other}`"))),
    };
    built.map_err(|e| usage(spec, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dslab_core::rational::ratio;

    #[test]
    fn grammar() {
        let c = parse_psi("const:1/2", Some(3)).unwrap();
        assert_eq!(c.support(), vec![1, 2, 3]);
        assert!(parse_psi("const:1/2", None).is_err());
        let c = parse_psi("const:1/4@5..6", None).unwrap();
        assert_eq!(c.support(), vec![5, 6]);
        let i = parse_psi("inv:1/2@1..4", None).unwrap();
        assert_eq!(i.get(4), ratio(1, 8));
        let l = parse_psi("list:3=1/3,7=1/8", None).unwrap();
        assert_eq!(l.get(7), ratio(1, 8));
        let d = parse_psi("ds:3:3:8:refined", None).unwrap();
        assert_eq!(d.support(), vec![15, 21, 35]);
        for bad in ["const:3/4@1..2", "inv:1", "list:3", "ds:3:3:3:full", "ds:1:2", "foo:1", "nope"] {
            assert!(parse_psi(bad, Some(5)).is_err(), "{bad}");
        }
    }
}
