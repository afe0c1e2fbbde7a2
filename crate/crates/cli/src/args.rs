//! Value parsers for angles, vector sources and catalysts.
//!
//! These only check syntax; anything that parses but is out of range is left
//! for the core to reject, so it surfaces as a domain error rather than a
//! usage error.

use std::fmt;
use std::path::PathBuf;

use serde::{Serialize, Serializer};

/// Radians, either a plain number or a multiple of `pi`: `pi/4`, `3pi/8`,
/// `3*pi/8`, `-pi/2`, `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    let value = match t.find("pi") {
        None => parse_number(&t)?,
        Some(at) => {
            let coeff = match t[..at].trim_end_matches('*') {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => parse_number(c)?,
            };
            let rest = &t[at + 2..];
            let tail = if rest.is_empty() {
                1.0
            } else if let Some(d) = rest.strip_prefix('/') {
                let d = parse_number(d)?;
                if d == 0.0 {
                    return Err(format!("division by zero in angle '{s}'"));
                }
                1.0 / d
            } else if let Some(m) = rest.strip_prefix('*') {
                parse_number(m)?
            } else {
                return Err(format!("cannot parse angle '{s}'"));
            };
            coeff * std::f64::consts::PI * tail
        }
    };
    Ok(value)
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner.split(',').map(|x| parse_number(x.trim())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum VecSource {
    /// Beam-splitter spectrum for `k` photons at angle θ.
    Bs {
        k: usize,
        theta: f64,
    },
    File(PathBuf),
    Literal(Vec<f64>),
}

pub fn parse_vec_source(s: &str) -> Result<VecSource, String> {
    if let Some(rest) = s.strip_prefix("bs:") {
        let (k, theta) = rest
            .split_once(',')
            .ok_or_else(|| format!("expected bs:K,THETA, got '{s}'"))?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| format!("'{k}' is not a photon number"))?;
        Ok(VecSource::Bs {
            k,
            theta: parse_angle(theta)?,
        })
    } else if let Some(path) = s.strip_prefix("file:") {
        Ok(VecSource::File(PathBuf::from(path)))
    } else {
        Ok(VecSource::Literal(parse_list(s)?))
    }
}

impl fmt::Display for VecSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VecSource::Bs { k, theta } => write!(f, "bs:{k},{theta}"),
            VecSource::File(p) => write!(f, "file:{}", p.display()),
            VecSource::Literal(v) => {
                let parts: Vec<String> = v.iter().map(f64::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl Serialize for VecSource {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalystArg {
    SinglePhoton(f64),
    Tmsv { r: f64, truncation: Option<usize> },
    File(PathBuf),
}

/// `single-photon:THETA`, `tmsv:R` or `tmsv:R,N`, `file:PATH`.
pub fn parse_catalyst(s: &str) -> Result<CatalystArg, String> {
    let (family, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("expected FAMILY:VALUE, got '{s}'"))?;
    match family {
        "single-photon" => Ok(CatalystArg::SinglePhoton(parse_angle(rest)?)),
        "tmsv" => {
            let (r, n) = match rest.split_once(',') {
                Some((r, n)) => (
                    r,
                    Some(
                        n.trim()
                            .parse()
                            .map_err(|_| format!("'{n}' is not a dimension"))?,
                    ),
                ),
                None => (rest, None),
            };
            Ok(CatalystArg::Tmsv {
                r: parse_number(r.trim())?,
                truncation: n,
            })
        }
        "file" => Ok(CatalystArg::File(PathBuf::from(rest))),
        other => Err(format!("unknown catalyst family '{other}'")),
    }
}

impl fmt::Display for CatalystArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalystArg::SinglePhoton(t) => write!(f, "single-photon:{t}"),
            CatalystArg::Tmsv {
                r,
                truncation: None,
            } => write!(f, "tmsv:{r}"),
            CatalystArg::Tmsv {
                r,
                truncation: Some(n),
            } => write!(f, "tmsv:{r},{n}"),
            CatalystArg::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for CatalystArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.62").unwrap(), 0.62);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("PI").unwrap(), PI);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("3*pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("pi*0.25").unwrap(), PI * 0.25);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("abc").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn sources() {
        assert_eq!(
            parse_vec_source("bs:3,0.62").unwrap(),
            VecSource::Bs { k: 3, theta: 0.62 }
        );
        assert_eq!(
            parse_vec_source("bs:2,pi/4").unwrap().to_string(),
            format!("bs:2,{}", PI / 4.0)
        );
        assert_eq!(
            parse_vec_source("[0.5, 0.5]").unwrap(),
            VecSource::Literal(vec![0.5, 0.5])
        );
        assert_eq!(
            parse_vec_source("0.7,0.3").unwrap(),
            VecSource::Literal(vec![0.7, 0.3])
        );
        assert!(matches!(
            parse_vec_source("file:/tmp/x.csv").unwrap(),
            VecSource::File(_)
        ));
        assert!(parse_vec_source("bs:3").is_err());
        assert!(parse_vec_source("bs:x,0.1").is_err());
        assert!(parse_vec_source("0.5,oops").is_err());
    }

    #[test]
    fn catalysts() {
        assert_eq!(
            parse_catalyst("single-photon:0.7").unwrap(),
            CatalystArg::SinglePhoton(0.7)
        );
        assert_eq!(
            parse_catalyst("tmsv:1.38").unwrap(),
            CatalystArg::Tmsv {
                r: 1.38,
                truncation: None
            }
        );
        assert_eq!(
            parse_catalyst("tmsv:1.38,200").unwrap(),
            CatalystArg::Tmsv {
                r: 1.38,
                truncation: Some(200)
            }
        );
        assert!(parse_catalyst("qubit:0.3").is_err());
        assert!(parse_catalyst("tmsv").is_err());
    }
}
