//! Rényi entropies (natural log) of spectra and θ-sweeps of them.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::beamsplitter::spectrum;
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;
use crate::vectors::{tensor, ProbVector};

/// Orders within this distance of one use the Shannon branch.
const SHANNON_WINDOW: f64 = 1e-9;

/// Rényi order `α ∈ [0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RenyiOrder<T>(T);

impl<T: Scalar> RenyiOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha.is_nan() || alpha < T::zero() {
            return Err(domain(format!("Renyi order {alpha} must be >= 0")));
        }
        Ok(Self(alpha))
    }

    pub fn shannon() -> Self {
        Self(T::one())
    }

    pub fn min_entropy() -> Self {
        Self(T::infinity())
    }

    pub fn alpha(self) -> T {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Column label used in tables: `S_1`, `S_10`, `S_inf`, `S_0.5`.
    pub fn label(self) -> String {
        format!("S_{self}")
    }
}

impl<T: Scalar> fmt::Display for RenyiOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<T: Scalar> FromStr for RenyiOrder<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Self::min_entropy()),
            other => {
                let a: f64 = other
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Renyi order '{s}'")))?;
                Self::new(T::lit(a))
            }
        }
    }
}

impl<T: Scalar> Serialize for RenyiOrder<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0.to_f64().unwrap_or(f64::NAN))
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for RenyiOrder<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct OrderVisitor<T>(std::marker::PhantomData<T>);

        impl<T: Scalar> Visitor<'_> for OrderVisitor<T> {
            type Value = RenyiOrder<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                RenyiOrder::new(T::lit(v)).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }
        }

        d.deserialize_any(OrderVisitor(std::marker::PhantomData))
    }
}

/// Parses a comma-separated list of orders, e.g. `1,10,inf`.
pub fn parse_orders<T: Scalar>(list: &str) -> Result<Vec<RenyiOrder<T>>> {
    list.split(',').map(str::parse).collect()
}

/// Rényi entropy in nats.
pub fn renyi<T: Scalar>(p: &ProbVector<T>, order: RenyiOrder<T>) -> T {
    let alpha = order.alpha();
    if alpha.is_infinite() {
        return -p.max().ln();
    }
    if alpha == T::zero() {
        let support = p.iter().filter(|&&x| x > T::TOL).count();
        return T::from_count(support).ln();
    }
    if (alpha - T::one()).abs() <= T::lit(SHANNON_WINDOW) {
        return shannon(p);
    }
    // ln Σ pᵢ^α evaluated relative to the largest component so high orders
    // do not underflow.
    let top = p.max();
    let ln_top = top.ln();
    let scaled: T = p
        .iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| (alpha * (x.ln() - ln_top)).exp())
        .sum();
    (alpha * ln_top + scaled.ln()) / (T::one() - alpha)
}

pub fn shannon<T: Scalar>(p: &ProbVector<T>) -> T {
    -p.iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| x * x.ln())
        .sum::<T>()
}

pub fn nats_to_bits<T: Scalar>(x: T) -> T {
    x / T::LN_2()
}

/// `S_α(p⊗q) − S_α(p) − S_α(q)`; zero up to roundoff.
pub fn additivity_check<T: Scalar>(
    p: &ProbVector<T>,
    q: &ProbVector<T>,
    order: RenyiOrder<T>,
) -> T {
    renyi(&tensor(p, q), order) - renyi(p, order) - renyi(q, order)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "T: Scalar + Serialize",
    deserialize = "T: Scalar + Deserialize<'de>"
))]
pub struct EntropyTable<T> {
    pub k: usize,
    pub orders: Vec<RenyiOrder<T>>,
    pub theta: Vec<T>,
    /// `values[i][o]` is the entropy at `theta[i]` for `orders[o]`.
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> EntropyTable<T> {
    pub fn column(&self, o: usize) -> Vec<T> {
        self.values.iter().map(|row| row[o]).collect()
    }

    pub fn into_bits(mut self) -> Self {
        for row in &mut self.values {
            for v in row.iter_mut() {
                *v = nats_to_bits(*v);
            }
        }
        self
    }
}

/// `steps` evenly spaced angles from `lo` to `hi` inclusive.
pub fn theta_grid<T: Scalar>(lo: T, hi: T, steps: usize) -> Result<Vec<T>> {
    if steps < 2 {
        return Err(domain("a theta grid needs at least 2 steps"));
    }
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(domain(format!("theta range [{lo}, {hi}] is empty")));
    }
    let last = T::from_count(steps - 1);
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                lo + (hi - lo) * T::from_count(i) / last
            }
        })
        .collect())
}

pub fn entropy_curve<T: Scalar>(
    k: usize,
    orders: &[RenyiOrder<T>],
    theta_grid: &[T],
) -> Result<EntropyTable<T>> {
    let mut values = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        let p = spectrum(k, theta)?;
        values.push(orders.iter().map(|&o| renyi(&p, o)).collect());
    }
    Ok(EntropyTable {
        k,
        orders: orders.to_vec(),
        theta: theta_grid.to_vec(),
        values,
    })
}
