//! Exact rational polyhedral geometry and integer linear algebra.
//!
//! Everything here works over `BigRational`/`BigInt`; there is no floating
//! point anywhere in the crate.

pub mod dd;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;
pub mod polytope;
pub mod volume;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use lattice::{saturated_perp_basis, smith_normal_form, IntegerMatrix, SmithForm};
pub use polyhedron::Polyhedron;
pub use polytope::{FaceLattice, Polytope};

/// Exact rational number in lowest terms.
pub type Rational = BigRational;

/// A point or direction with rational coordinates.
pub type QVec = Vec<Rational>;
/// A lattice vector.
pub type ZVec = Vec<BigInt>;

/// Which side of the pairing a vector lives on.
///
/// `M` is the functional space `(R^d)*` that houses the `Δ` side, `N` the
/// vector space `R^d` that houses the `∇` side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    M,
    N,
}

impl Role {
    pub fn dual(self) -> Role {
        match self {
            Role::M => Role::N,
            Role::N => Role::M,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::M => f.write_str("M"),
            Role::N => f.write_str("N"),
        }
    }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn zvec_to_q(xs: &[BigInt]) -> QVec {
    xs.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn i64vec_to_q(xs: &[i64]) -> QVec {
    qvec(xs)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn zdot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Converts an integral rational vector to `i64` coordinates.
pub fn to_i64(v: &[Rational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. The zero vector maps to itself.
pub fn primitive(v: &[Rational]) -> ZVec {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: ZVec = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    primitive_z(ints)
}

pub fn primitive_z(mut v: ZVec) -> ZVec {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

/// Format a rational as `p` or `p/q`.
pub fn fmt_q(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
