//! Path lengths as `(cost, eta)` pairs under lexicographic order.
//!
//! `eta` counts the edges of a path that lie outside the current preserver;
//! it only breaks ties between paths of equal cost.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::graph::Cost;

/// Lexicographic path length. [`LexCost::Top`] stands for `(+inf, +inf)`:
/// it is absorbing under addition and greater than every finite value.
///
/// The derived order compares variants first (`Finite < Top`), then the
/// finite fields in declaration order, which is exactly the lexicographic
/// order on `(cost, hops)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LexCost {
    Finite { cost: Cost, hops: u32 },
    Top,
}

impl LexCost {
    pub const ZERO: LexCost = LexCost::Finite { cost: 0, hops: 0 };

    #[inline]
    pub const fn new(cost: Cost, hops: u32) -> Self {
        LexCost::Finite { cost, hops }
    }

    pub fn is_top(&self) -> bool {
        matches!(self, LexCost::Top)
    }

    pub fn cost(&self) -> Option<Cost> {
        match *self {
            LexCost::Finite { cost, .. } => Some(cost),
            LexCost::Top => None,
        }
    }

    pub fn hops(&self) -> Option<u32> {
        match *self {
            LexCost::Finite { hops, .. } => Some(hops),
            LexCost::Top => None,
        }
    }
}

impl Default for LexCost {
    fn default() -> Self {
        LexCost::ZERO
    }
}

impl Add for LexCost {
    type Output = LexCost;

    #[inline]
    fn add(self, rhs: LexCost) -> LexCost {
        match (self, rhs) {
            (LexCost::Finite { cost: c1, hops: h1 }, LexCost::Finite { cost: c2, hops: h2 }) => {
                LexCost::Finite {
                    cost: c1 + c2,
                    hops: h1 + h2,
                }
            }
            _ => LexCost::Top,
        }
    }
}

impl fmt::Display for LexCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexCost::Finite { cost, hops } => write!(f, "({cost},{hops})"),
            LexCost::Top => f.write_str("TOP"),
        }
    }
}

pub fn lex_compare(a: LexCost, b: LexCost) -> Ordering {
    a.cmp(&b)
}

pub fn lex_add(a: LexCost, b: LexCost) -> LexCost {
    a + b
}
