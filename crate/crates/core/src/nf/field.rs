use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::Integer;
use serde::{Deserialize, Serialize};

use super::NfError;

/// Description of a supported number field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rational,
    /// Q(√d) with d squarefree, d ∉ {0, 1}.
    Quadratic { d: i64 },
    /// Q(ζₙ), n ≥ 3.
    Cyclotomic { n: u32 },
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<Self, NfError> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(NfError::InvalidField(format!("Q(sqrt,{d}): d must be squarefree and not 0 or 1")));
        }
        Ok(FieldSpec::Quadratic { d })
    }

    pub fn cyclotomic(n: u32) -> Result<Self, NfError> {
        if n < 3 {
            return Err(NfError::InvalidField(format!("Q(zeta,{n}): n must be at least 3")));
        }
        Ok(FieldSpec::Cyclotomic { n })
    }

    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Rational => 1,
            FieldSpec::Quadratic { .. } => 2,
            FieldSpec::Cyclotomic { n } => euler_phi(*n as u64) as usize,
        }
    }

    /// Whether the field contains a square root of −1.
    pub fn contains_i(&self) -> bool {
        match self {
            FieldSpec::Rational => false,
            FieldSpec::Quadratic { d } => *d == -1,
            FieldSpec::Cyclotomic { n } => n % 4 == 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quadratic { d } => write!(f, "Q(sqrt,{d})"),
            FieldSpec::Cyclotomic { n } => write!(f, "Q(zeta,{n})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = NfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let inner = t
            .strip_prefix("Q(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| NfError::Parse { pos: 0, msg: format!("unrecognised field literal {s:?}") })?;
        let (kind, arg) = inner
            .split_once(',')
            .ok_or_else(|| NfError::Parse { pos: 2, msg: "expected `kind,argument` inside Q(...)".into() })?;
        let arg_pos = 3 + kind.len();
        match kind {
            "sqrt" => {
                let d: i64 = arg.parse().map_err(|_| NfError::Parse { pos: arg_pos, msg: format!("bad integer {arg:?}") })?;
                FieldSpec::quadratic(d)
            }
            "zeta" => {
                let n: u32 = arg.parse().map_err(|_| NfError::Parse { pos: arg_pos, msg: format!("bad integer {arg:?}") })?;
                FieldSpec::cyclotomic(n)
            }
            _ => Err(NfError::Parse { pos: 2, msg: format!("unknown field kind {kind:?}") }),
        }
    }
}

/// Shared, precomputed data for a field: its FieldSpec and defining polynomial.
#[derive(Debug)]
pub(crate) struct FieldData {
    pub(crate) spec: FieldSpec,
    /// Monic defining polynomial, low degree first (length degree + 1).
    pub(crate) modulus: Vec<Integer>,
    /// For cyclotomic fields: ζ^j reduced to the power basis for 0 ≤ j < n.
    pub(crate) zeta_powers: Vec<Vec<Integer>>,
}

/// Cheap-to-clone handle on a field with its arithmetic tables.
#[derive(Clone, Debug)]
pub struct Field(pub(crate) Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let (modulus, zeta_powers) = match &spec {
            FieldSpec::Rational => (vec![Integer::ZERO, Integer::from(1)], Vec::new()),
            FieldSpec::Quadratic { d } => (vec![Integer::from(-*d), Integer::ZERO, Integer::from(1)], Vec::new()),
            FieldSpec::Cyclotomic { n } => {
                let phi = cyclotomic_polynomial(*n);
                let deg = phi.len() - 1;
                let mut powers = Vec::with_capacity(*n as usize);
                let mut cur = vec![Integer::ZERO; deg];
                cur[0] = Integer::from(1);
                for _ in 0..*n {
                    powers.push(cur.clone());
                    // multiply by x and reduce
                    let top = cur[deg - 1].clone();
                    for i in (1..deg).rev() {
                        cur[i] = cur[i - 1].clone();
                    }
                    cur[0] = Integer::ZERO;
                    if top != 0 {
                        for (i, c) in cur.iter_mut().enumerate() {
                            *c -= Integer::from(&top * &phi[i]);
                        }
                    }
                }
                (phi, powers)
            }
        };
        Field(Arc::new(FieldData { spec, modulus, zeta_powers }))
    }

    pub fn rational() -> Field {
        Field::new(FieldSpec::Rational)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// Monic defining polynomial of the power basis generator, low degree first.
    pub fn modulus(&self) -> &[Integer] {
        &self.0.modulus
    }
}

impl From<FieldSpec> for Field {
    fn from(spec: FieldSpec) -> Self {
        Field::new(spec)
    }
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn is_squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Φₙ with integer coefficients, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Integer> {
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut num = vec![Integer::ZERO; n as usize + 1];
    num[0] = Integer::from(-1);
    num[n as usize] = Integer::from(1);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    num
}

fn exact_div_monic(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qdeg = num.len() - 1 - dn;
    let mut quot = vec![Integer::ZERO; qdeg + 1];
    for i in (0..=qdeg).rev() {
        let c = rem[i + dn].clone();
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= Integer::from(&c * dj);
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&c| Integer::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5).len(), 5);
    }

    #[test]
    fn parse_and_degree() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("Q(sqrt,10)".parse::<FieldSpec>().unwrap().degree(), 2);
        assert_eq!("Q(zeta, 8)".parse::<FieldSpec>().unwrap().degree(), 4);
        assert!("Q(sqrt,4)".parse::<FieldSpec>().is_err());
        assert!("Q(sqrt,1)".parse::<FieldSpec>().is_err());
        assert!("Q(zeta,2)".parse::<FieldSpec>().is_err());
        let err = "Q(sqrt,x)".parse::<FieldSpec>().unwrap_err();
        assert!(matches!(err, NfError::Parse { pos: 7, .. }));
    }

    #[test]
    fn zeta_power_table_wraps() {
        let f = Field::new(FieldSpec::Cyclotomic { n: 3 });
        // ζ₃² = −1 − ζ₃
        assert_eq!(f.0.zeta_powers[2], ints(&[-1, -1]));
    }
}
