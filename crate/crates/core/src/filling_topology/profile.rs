use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

/// Rank of a free abelian group, possibly countably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn is_zero(self) -> bool {
        self == Rank::Finite(0)
    }
}

impl Add for Rank {
    type Output = Rank;

    fn add(self, other: Rank) -> Rank {
        match (self, other) {
            (Rank::Finite(a), Rank::Finite(b)) => Rank::Finite(a + b),
            _ => Rank::Infinite,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(r) => s.serialize_u64(*r),
            Rank::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RankVisitor;
        impl Visitor<'_> for RankVisitor {
            type Value = Rank;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"INFINITE\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rank, E> {
                Ok(Rank::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rank, E> {
                u64::try_from(v).map(Rank::Finite).map_err(|_| E::custom("rank must be nonnegative"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rank, E> {
                if v == "INFINITE" {
                    Ok(Rank::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(RankVisitor)
    }
}

/// Ranks by degree; degrees not listed have rank zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub ranks: BTreeMap<i32, Rank>,
}

impl CohomologyProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, Rank)>) -> Self {
        let mut p = Self::new();
        for (q, r) in pairs {
            p.set(q, r);
        }
        p
    }

    /// Reduced cohomology of `S^n`.
    pub fn sphere(n: i32) -> Self {
        Self::from_pairs([(n, Rank::Finite(1))])
    }

    pub fn rank(&self, q: i32) -> Rank {
        self.ranks.get(&q).copied().unwrap_or(Rank::Finite(0))
    }

    pub fn set(&mut self, q: i32, r: Rank) {
        if r.is_zero() {
            self.ranks.remove(&q);
        } else {
            self.ranks.insert(q, r);
        }
    }

    /// Alternating sum of finite ranks; `None` if some rank is infinite.
    pub fn euler(&self) -> Option<i64> {
        self.ranks.iter().try_fold(0i64, |acc, (q, r)| match r {
            Rank::Finite(v) => Some(acc + if q % 2 == 0 { *v as i64 } else { -(*v as i64) }),
            Rank::Infinite => None,
        })
    }

    /// Lowest and highest degree with nonzero rank.
    pub fn support(&self) -> Option<(i32, i32)> {
        Some((*self.ranks.keys().next()?, *self.ranks.keys().next_back()?))
    }

    /// Every degree's rank is at least the rank in `other`.
    pub fn dominates(&self, other: &Self) -> bool {
        other.ranks.iter().all(|(q, r)| self.rank(*q) >= *r)
    }
}

impl fmt::Display for CohomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ranks.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.ranks.iter().map(|(q, r)| format!("{q}:{r}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
