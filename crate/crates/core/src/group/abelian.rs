use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::presentation::{tietze_simplify, Presentation};
use super::smith::{smith_normal_form, IntegerMatrix};

/// Finitely generated abelian group `Z^r ⊕ Z_d1 ⊕ … ⊕ Z_dk` with
/// `1 < d1 | d2 | … | dk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    /// The group `Z^n / (diagonal)`: entry 0 contributes a free summand,
    /// entries ±1 vanish. Any list of cyclic orders is accepted.
    pub fn from_orders<T: Into<BigInt> + Clone>(orders: &[T]) -> Self {
        let n = orders.len();
        let mut m = IntegerMatrix::zeros(n, n);
        for (i, x) in orders.iter().enumerate() {
            m.set(i, i, x.clone().into());
        }
        let s = smith_normal_form(&m);
        Self::from_diagonal(n, &s.d.diagonal())
    }

    fn from_diagonal(generators: usize, diagonal: &[BigInt]) -> Self {
        let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
        let torsion = diagonal.iter().filter(|x| !x.is_zero() && !x.abs().is_one()).map(|x| x.abs()).collect();
        AbelianGroup { free_rank: generators - rank, torsion }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[BigInt::from(n)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Cyclic factors in divisibility order, free summands as trailing zeros.
    fn chain(&self) -> Vec<BigInt> {
        self.torsion.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), self.free_rank)).collect()
    }

    /// Whether `self` is a homomorphic image of `other`: aligning both
    /// factor chains at the top, every factor of `self` divides the
    /// corresponding factor of `other`.
    pub fn is_quotient_of(&self, other: &AbelianGroup) -> bool {
        let (mine, theirs) = (self.chain(), other.chain());
        if mine.len() > theirs.len() {
            return false;
        }
        mine.iter()
            .rev()
            .zip(theirs.iter().rev())
            .all(|(b, a)| if b.is_zero() { a.is_zero() } else { a.is_multiple_of(b) })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("AbelianGroup", 3)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        s.serialize_field("torsion", &self.torsion.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        s.serialize_field("text", &self.to_string())?;
        s.end()
    }
}

/// Exponent-sum matrix (relators by generators) reduced to Smith form.
pub fn abelianization(p: &Presentation) -> AbelianGroup {
    let mut m = IntegerMatrix::zeros(p.relators.len(), p.generators);
    for (i, r) in p.relators.iter().enumerate() {
        for l in r {
            let step = if l.inverse { -1 } else { 1 };
            let x = m.get(i, l.generator) + step;
            m.set(i, l.generator, x);
        }
    }
    let s = smith_normal_form(&m);
    AbelianGroup::from_diagonal(p.generators, &s.d.diagonal())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Triviality {
    Trivial,
    Nontrivial,
    Unknown,
}

/// Nontrivial when the abelianization is; trivial when simplification
/// removes every generator; otherwise undecided.
pub fn triviality_status(p: &Presentation) -> Triviality {
    if !abelianization(p).is_trivial() {
        Triviality::Nontrivial
    } else if tietze_simplify(p).generators == 0 {
        Triviality::Trivial
    } else {
        Triviality::Unknown
    }
}
