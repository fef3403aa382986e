use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use norden_core::GeomError;
use norden_even::{class_set_name, EvenClass};
use norden_odd::{odd_class_set_name, OddClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Generator recorded in report metadata.
pub const PRNG: &str = "ChaCha8 (rand_chacha), seed_from_u64, stream = sample index";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("invalid class target `{0}`")]
    InvalidTarget(String),
    #[error("class target {target} does not belong to the {parity} case")]
    ParityMismatch { target: String, parity: Parity },
    #[error("n must be at least 1")]
    InvalidDimension,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn dim(self, n: usize) -> usize {
        match self {
            Parity::Even => 2 * n,
            Parity::Odd => 2 * n + 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(SamplerError::InvalidTarget(format!("parity {other}"))),
        }
    }
}

/// A direct sum of basic classes; the empty sum is `W0` / `F0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassTarget {
    Even(BTreeSet<EvenClass>),
    Odd(BTreeSet<OddClass>),
}

impl ClassTarget {
    pub fn parity(&self) -> Parity {
        match self {
            ClassTarget::Even(_) => Parity::Even,
            ClassTarget::Odd(_) => Parity::Odd,
        }
    }

    /// The class where `N(hx,hy)` vanishes: every odd class but `F3, F7`.
    pub fn u0() -> Self {
        ClassTarget::Odd(OddClass::ALL.into_iter().filter(|c| !OddClass::QUASI_KAEHLER.contains(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ClassTarget::Even(s) => s.is_empty(),
            ClassTarget::Odd(s) => s.is_empty(),
        }
    }
}

impl fmt::Display for ClassTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTarget::Even(s) => f.write_str(&class_set_name(s)),
            ClassTarget::Odd(s) => f.write_str(&odd_class_set_name(s)),
        }
    }
}

/// Subscript digits and `⊕` are accepted alongside ASCII.
fn normalise(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).expect("digit"),
            '⊕' => '+',
            c => c.to_ascii_uppercase(),
        })
        .filter(|c| !c.is_whitespace())
        .collect()
}

impl FromStr for ClassTarget {
    type Err = SamplerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = normalise(s);
        let bad = || SamplerError::InvalidTarget(s.to_string());
        match norm.as_str() {
            "W0" => return Ok(ClassTarget::Even(BTreeSet::new())),
            "F0" => return Ok(ClassTarget::Odd(BTreeSet::new())),
            "U0" => return Ok(ClassTarget::u0()),
            _ => {}
        }
        let tokens: Vec<&str> = norm.split('+').collect();
        if tokens.iter().any(|t| t.is_empty()) {
            return Err(bad());
        }
        if tokens.iter().all(|t| t.starts_with('W')) {
            let set = tokens
                .iter()
                .map(|t| EvenClass::ALL.into_iter().find(|c| c.to_string() == *t).ok_or_else(bad))
                .collect::<Result<_, _>>()?;
            Ok(ClassTarget::Even(set))
        } else if tokens.iter().all(|t| t.starts_with('F')) {
            let set = tokens
                .iter()
                .map(|t| OddClass::ALL.into_iter().find(|c| c.to_string() == *t).ok_or_else(bad))
                .collect::<Result<_, _>>()?;
            Ok(ClassTarget::Odd(set))
        } else {
            Err(bad())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub parity: Parity,
    pub n: usize,
    pub class_target: ClassTarget,
    pub seed: u64,
    pub count: usize,
}

impl SampleSpec {
    pub fn new(
        parity: Parity,
        n: usize,
        class_target: ClassTarget,
        seed: u64,
        count: usize,
    ) -> Result<Self, SamplerError> {
        if n == 0 {
            return Err(SamplerError::InvalidDimension);
        }
        if class_target.parity() != parity {
            return Err(SamplerError::ParityMismatch { target: class_target.to_string(), parity });
        }
        Ok(Self { parity, n, class_target, seed, count })
    }

    pub fn dim(&self) -> usize {
        self.parity.dim(self.n)
    }

    /// Independent stream for sample `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        derived_rng(self.seed, index)
    }
}

pub fn derived_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
