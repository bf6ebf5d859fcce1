//! Generators for the strictly increasing integer sequences under study,
//! plus ingestion of user-provided sequence files (one integer per line,
//! strictly ascending).

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory;

/// Largest admissible term; prefix materialization errors beyond this.
pub const MAX_TERM: u64 = (1 << 63) - 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    Natural,
    Squares,
    Primes,
    Quadratic { a: u64, b: i64, c: i64 },
    Geometric { ratio: u64, first: u64 },
    PiatetskiShapiro { p: u32, q: u32 },
    File { path: PathBuf },
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Natural => write!(f, "natural"),
            SequenceSpec::Squares => write!(f, "squares"),
            SequenceSpec::Primes => write!(f, "primes"),
            SequenceSpec::Quadratic { a, b, c } => write!(f, "quadratic:{a},{b},{c}"),
            SequenceSpec::Geometric { ratio, first } => write!(f, "geometric:{ratio},{first}"),
            SequenceSpec::PiatetskiShapiro { p, q } => write!(f, "ps:{p}/{q}"),
            SequenceSpec::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    /// Parses the CLI form: `natural`, `squares`, `primes`, `quadratic:a,b,c`,
    /// `geometric:ratio,first`, `ps:p/q`, `file:path`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(msg);
        match s {
            "natural" => return Ok(SequenceSpec::Natural),
            "squares" => return Ok(SequenceSpec::Squares),
            "primes" => return Ok(SequenceSpec::Primes),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("quadratic:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad(format!("quadratic wants a,b,c — got `{rest}`")));
            }
            let a = parts[0].trim().parse().map_err(|e| bad(format!("quadratic a: {e}")))?;
            let b = parts[1].trim().parse().map_err(|e| bad(format!("quadratic b: {e}")))?;
            let c = parts[2].trim().parse().map_err(|e| bad(format!("quadratic c: {e}")))?;
            return Ok(SequenceSpec::Quadratic { a, b, c });
        }
        if let Some(rest) = s.strip_prefix("geometric:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(bad(format!("geometric wants ratio,first — got `{rest}`")));
            }
            let ratio = parts[0].trim().parse().map_err(|e| bad(format!("geometric ratio: {e}")))?;
            let first = parts[1].trim().parse().map_err(|e| bad(format!("geometric first: {e}")))?;
            return Ok(SequenceSpec::Geometric { ratio, first });
        }
        if let Some(rest) = s.strip_prefix("ps:") {
            let (p, q) = rest
                .split_once('/')
                .ok_or_else(|| bad(format!("ps wants p/q — got `{rest}`")))?;
            let p = p.trim().parse().map_err(|e| bad(format!("ps p: {e}")))?;
            let q = q.trim().parse().map_err(|e| bad(format!("ps q: {e}")))?;
            return Ok(SequenceSpec::PiatetskiShapiro { p, q });
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(SequenceSpec::File { path: PathBuf::from(rest) });
        }
        Err(bad(format!("unknown sequence spec `{s}`")))
    }
}

/// A strictly increasing sequence of positive integers with a lazily
/// materialized prefix. Extension takes `&mut self`; share only after the
/// needed prefix is materialized.
pub struct IntegerSequence {
    spec: SequenceSpec,
    cache: Vec<u64>,
    /// Present only for file-backed sequences: the full, validated content.
    file_terms: Option<Vec<u64>>,
    /// Prime generator state: primes sieved so far.
    sieved_primes: Vec<u64>,
}

pub fn make_sequence(spec: SequenceSpec) -> Result<IntegerSequence> {
    IntegerSequence::new(spec)
}

impl IntegerSequence {
    pub fn new(spec: SequenceSpec) -> Result<Self> {
        match &spec {
            SequenceSpec::Quadratic { a, b, c } => {
                if *a < 1 {
                    return Err(Error::InvalidParameter("quadratic needs a >= 1".into()));
                }
                // Strictly increasing on n >= 1 iff the first forward
                // difference a(2n+1)+b is positive at n = 1.
                if 3 * (*a as i128) + (*b as i128) < 1 {
                    return Err(Error::InvalidParameter(
                        "quadratic not strictly increasing on n >= 1 (need 3a+b >= 1)".into(),
                    ));
                }
                if (*a as i128) + (*b as i128) + (*c as i128) < 1 {
                    return Err(Error::InvalidParameter(
                        "quadratic first term must be positive (need a+b+c >= 1)".into(),
                    ));
                }
            }
            SequenceSpec::Geometric { ratio, first } => {
                if *ratio < 2 {
                    return Err(Error::InvalidParameter("geometric needs ratio >= 2".into()));
                }
                if *first < 1 {
                    return Err(Error::InvalidParameter("geometric needs first >= 1".into()));
                }
            }
            SequenceSpec::PiatetskiShapiro { p, q } if *q < 1 || p <= q => {
                return Err(Error::InvalidParameter(
                    "piatetski_shapiro needs theta = p/q > 1".into(),
                ));
            }
            _ => {}
        }
        let file_terms = match &spec {
            SequenceSpec::File { path } => Some(load_sequence_file(path)?),
            _ => None,
        };
        Ok(IntegerSequence {
            spec,
            cache: Vec::new(),
            file_terms,
            sieved_primes: Vec::new(),
        })
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    /// The first `n` terms a_1..a_n.
    pub fn prefix(&mut self, n: usize) -> Result<&[u64]> {
        if n < 1 {
            return Err(Error::InvalidParameter("prefix needs N >= 1".into()));
        }
        while self.cache.len() < n {
            let idx = self.cache.len() as u64 + 1; // 1-based n
            let term = self.term(idx)?;
            if term > MAX_TERM {
                return Err(Error::Overflow(format!(
                    "a_{idx} = {term} exceeds 2^63 - 1 for {}",
                    self.spec
                )));
            }
            if let Some(&prev) = self.cache.last() {
                if term <= prev {
                    return Err(Error::InvalidParameter(format!(
                        "{} is not strictly increasing at n = {idx} ({term} after {prev})",
                        self.spec
                    )));
                }
            }
            if term == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{} produced a non-positive term at n = {idx}",
                    self.spec
                )));
            }
            self.cache.push(term);
        }
        Ok(&self.cache[..n])
    }

    fn term(&mut self, n: u64) -> Result<u64> {
        match &self.spec {
            SequenceSpec::Natural => Ok(n),
            SequenceSpec::Squares => Ok(n * n),
            SequenceSpec::Primes => self.nth_prime(n),
            SequenceSpec::Quadratic { a, b, c } => {
                let v = (*a as i128) * (n as i128) * (n as i128)
                    + (*b as i128) * (n as i128)
                    + (*c as i128);
                if v < 1 || v > MAX_TERM as i128 {
                    return Err(Error::Overflow(format!(
                        "quadratic term at n = {n} is out of range"
                    )));
                }
                Ok(v as u64)
            }
            SequenceSpec::Geometric { ratio, first } => {
                let mut v = *first as u128;
                for _ in 0..n {
                    v = v.checked_mul(*ratio as u128).ok_or_else(|| {
                        Error::Overflow(format!("geometric term at n = {n} overflows"))
                    })?;
                    if v > MAX_TERM as u128 {
                        return Err(Error::Overflow(format!(
                            "a_{n} exceeds 2^63 - 1 for {}",
                            self.spec
                        )));
                    }
                }
                Ok(v as u64)
            }
            SequenceSpec::PiatetskiShapiro { p, q } => piatetski_shapiro_floor(n, *p, *q),
            SequenceSpec::File { .. } => {
                let terms = self.file_terms.as_ref().expect("file terms loaded in new()");
                terms.get(n as usize - 1).copied().ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "sequence file has only {} terms, asked for {n}",
                        terms.len()
                    ))
                })
            }
        }
    }

    fn nth_prime(&mut self, n: u64) -> Result<u64> {
        while (self.sieved_primes.len() as u64) < n {
            // p_n < n(ln n + ln ln n) for n >= 6; pad generously below that.
            let nf = (n.max(6)) as f64;
            let mut bound = (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 16;
            if !self.sieved_primes.is_empty() {
                bound = bound.max(self.sieved_primes.last().unwrap() * 2);
            }
            self.sieved_primes = numtheory::primes_up_to(bound)?;
        }
        Ok(self.sieved_primes[n as usize - 1])
    }
}

/// ⌊n^{p/q}⌋ by exact integer arithmetic: the q-th root of n^p, with the
/// floor verified by re-powering (floating point goes wrong near exact
/// powers).
fn piatetski_shapiro_floor(n: u64, p: u32, q: u32) -> Result<u64> {
    let np = (n as u128).checked_pow(p).ok_or_else(|| {
        Error::Overflow(format!("n^p overflows 128 bits at n = {n}, p = {p}"))
    })?;
    let mut r = np.nth_root(q);
    // nth_root is documented to floor, but the verification is cheap and
    // makes the contract independent of it.
    while r.checked_pow(q).is_none_or(|rq| rq > np) {
        r -= 1;
    }
    while (r + 1).checked_pow(q).is_some_and(|rq| rq <= np) {
        r += 1;
    }
    if r > MAX_TERM as u128 {
        return Err(Error::Overflow(format!(
            "piatetski_shapiro term at n = {n} exceeds 2^63 - 1"
        )));
    }
    Ok(r as u64)
}

fn load_sequence_file(path: &PathBuf) -> Result<Vec<u64>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::SequenceFile {
        path: path.clone(),
        reason: e.to_string(),
    })?;
    let mut terms = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            return Err(Error::SequenceFile {
                path: path.clone(),
                reason: format!("line {}: empty line", lineno + 1),
            });
        }
        let v: u64 = trimmed.parse().map_err(|e| Error::SequenceFile {
            path: path.clone(),
            reason: format!("line {}: {e}", lineno + 1),
        })?;
        if !(1..=MAX_TERM).contains(&v) {
            return Err(Error::SequenceFile {
                path: path.clone(),
                reason: format!("line {}: term {v} out of range [1, 2^63-1]", lineno + 1),
            });
        }
        if let Some(&prev) = terms.last() {
            if v <= prev {
                return Err(Error::SequenceFile {
                    path: path.clone(),
                    reason: format!("line {}: {v} not greater than {prev}", lineno + 1),
                });
            }
        }
        terms.push(v);
    }
    if terms.is_empty() {
        return Err(Error::SequenceFile {
            path: path.clone(),
            reason: "no terms".into(),
        });
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefix_of(spec: SequenceSpec, n: usize) -> Vec<u64> {
        let mut s = IntegerSequence::new(spec).unwrap();
        s.prefix(n).unwrap().to_vec()
    }

    #[test]
    fn basic_generators() {
        assert_eq!(prefix_of(SequenceSpec::Squares, 4), vec![1, 4, 9, 16]);
        assert_eq!(prefix_of(SequenceSpec::Primes, 4), vec![2, 3, 5, 7]);
        assert_eq!(prefix_of(SequenceSpec::Natural, 3), vec![1, 2, 3]);
        assert_eq!(
            prefix_of(SequenceSpec::Quadratic { a: 1, b: 0, c: 0 }, 3),
            vec![1, 4, 9]
        );
        assert_eq!(
            prefix_of(SequenceSpec::Geometric { ratio: 2, first: 1 }, 4),
            vec![2, 4, 8, 16]
        );
    }

    #[test]
    fn piatetski_shapiro_three_halves() {
        assert_eq!(
            prefix_of(SequenceSpec::PiatetskiShapiro { p: 3, q: 2 }, 5),
            vec![1, 2, 5, 8, 11]
        );
    }

    #[test]
    fn piatetski_shapiro_floor_is_exact() {
        // Floor verified by integer comparison m^2 <= n^3 < (m+1)^2.
        let mut s = IntegerSequence::new(SequenceSpec::PiatetskiShapiro { p: 3, q: 2 }).unwrap();
        let terms = s.prefix(10_000).unwrap();
        for (i, &m) in terms.iter().enumerate() {
            let n = (i + 1) as u128;
            let m = m as u128;
            assert!(m * m <= n * n * n);
            assert!((m + 1) * (m + 1) > n * n * n);
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(IntegerSequence::new(SequenceSpec::PiatetskiShapiro { p: 1, q: 1 }).is_err());
        assert!(IntegerSequence::new(SequenceSpec::PiatetskiShapiro { p: 2, q: 3 }).is_err());
        assert!(IntegerSequence::new(SequenceSpec::Geometric { ratio: 1, first: 1 }).is_err());
        assert!(IntegerSequence::new(SequenceSpec::Quadratic { a: 1, b: -3, c: 9 }).is_err());
        assert!(IntegerSequence::new(SequenceSpec::Quadratic { a: 0, b: 1, c: 0 }).is_err());
    }

    #[test]
    fn geometric_overflow_errors() {
        let mut s = IntegerSequence::new(SequenceSpec::Geometric { ratio: 2, first: 1 }).unwrap();
        assert!(s.prefix(62).is_ok());
        let err = IntegerSequence::new(SequenceSpec::Geometric { ratio: 2, first: 1 })
            .unwrap()
            .prefix(63)
            .unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }

    #[test]
    fn all_generators_strictly_increasing() {
        let specs = [
            SequenceSpec::Natural,
            SequenceSpec::Squares,
            SequenceSpec::Primes,
            SequenceSpec::Quadratic { a: 2, b: -1, c: 3 },
            SequenceSpec::PiatetskiShapiro { p: 3, q: 2 },
            SequenceSpec::PiatetskiShapiro { p: 7, q: 5 },
        ];
        for spec in specs {
            let terms = prefix_of(spec, 10_000);
            assert!(terms.windows(2).all(|w| w[0] < w[1]));
            assert!(terms[0] >= 1);
        }
    }

    #[test]
    fn file_roundtrip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.txt");
        std::fs::write(&good, "1\n4\n9\n").unwrap();
        assert_eq!(prefix_of(SequenceSpec::File { path: good.clone() }, 3), vec![1, 4, 9]);

        let decreasing = dir.path().join("bad.txt");
        std::fs::write(&decreasing, "5\n3\n").unwrap();
        assert!(IntegerSequence::new(SequenceSpec::File { path: decreasing }).is_err());

        let empty = dir.path().join("empty.txt");
        std::fs::write(&empty, "").unwrap();
        assert!(IntegerSequence::new(SequenceSpec::File { path: empty }).is_err());

        let junk = dir.path().join("junk.txt");
        std::fs::write(&junk, "1\ntwo\n").unwrap();
        assert!(IntegerSequence::new(SequenceSpec::File { path: junk }).is_err());
    }

    #[test]
    fn spec_string_roundtrip() {
        for s in [
            "natural",
            "squares",
            "primes",
            "quadratic:2,-1,3",
            "geometric:3,5",
            "ps:3/2",
        ] {
            let spec: SequenceSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("ps:2".parse::<SequenceSpec>().is_err());
        assert!("nonsense".parse::<SequenceSpec>().is_err());
    }
}
