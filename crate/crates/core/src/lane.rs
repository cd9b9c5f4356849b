//! Truth-value carriers for formula evaluation.
//!
//! Every evaluator in this crate is written against [`Lane`], so the same
//! code checks one trace at a time (`bool`) or many traces at once, one per
//! bit (`u64`, `u128`).

use std::fmt::Debug;
use std::ops::{BitAnd, BitOr, BitXor, Not};

pub trait Lane:
    Copy
    + Debug
    + Eq
    + Send
    + Sync
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + 'static
{
    /// Number of independent truth values carried.
    const WIDTH: usize;

    fn splat(value: bool) -> Self;

    fn get(self, lane: usize) -> bool;

    fn set(&mut self, lane: usize, value: bool);

    fn none() -> Self {
        Self::splat(false)
    }

    fn all() -> Self {
        Self::splat(true)
    }

    fn is_none(self) -> bool {
        self == Self::none()
    }
}

impl Lane for bool {
    const WIDTH: usize = 1;

    fn splat(value: bool) -> Self {
        value
    }

    fn get(self, _lane: usize) -> bool {
        self
    }

    fn set(&mut self, _lane: usize, value: bool) {
        *self = value;
    }
}

macro_rules! word_lane {
    ($($t:ty),*) => {$(
        impl Lane for $t {
            const WIDTH: usize = <$t>::BITS as usize;

            fn splat(value: bool) -> Self {
                if value { <$t>::MAX } else { 0 }
            }

            fn get(self, lane: usize) -> bool {
                (self >> lane) & 1 == 1
            }

            fn set(&mut self, lane: usize, value: bool) {
                if value {
                    *self |= 1 << lane;
                } else {
                    *self &= !(1 << lane);
                }
            }
        }
    )*};
}

word_lane!(u8, u16, u32, u64, u128);

/// A truth value paired with its lock status: `locked_true` lanes are true
/// now and on every extension of the trace, likewise `locked_false`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Judged<L> {
    pub value: L,
    pub locked_true: L,
    pub locked_false: L,
}

impl<L: Lane> Judged<L> {
    pub fn constant(value: bool) -> Self {
        Judged {
            value: L::splat(value),
            locked_true: L::splat(value),
            locked_false: L::splat(!value),
        }
    }

    pub fn open(value: L) -> Self {
        Judged {
            value,
            locked_true: L::none(),
            locked_false: L::none(),
        }
    }

    pub fn not(self) -> Self {
        Judged {
            value: !self.value,
            locked_true: self.locked_false,
            locked_false: self.locked_true,
        }
    }

    pub fn and(self, other: Self) -> Self {
        Judged {
            value: self.value & other.value,
            locked_true: self.locked_true & other.locked_true,
            locked_false: self.locked_false | other.locked_false,
        }
    }

    pub fn or(self, other: Self) -> Self {
        Judged {
            value: self.value | other.value,
            locked_true: self.locked_true | other.locked_true,
            locked_false: self.locked_false & other.locked_false,
        }
    }

    pub fn implies(self, other: Self) -> Self {
        self.not().or(other)
    }

    pub fn iff(self, other: Self) -> Self {
        let both = self.locked() & other.locked();
        let value = !(self.value ^ other.value);
        Judged {
            value,
            locked_true: both & value,
            locked_false: both & !value,
        }
    }

    pub fn ite(cond: Self, then: Self, otherwise: Self) -> Self {
        Judged {
            value: (cond.value & then.value) | (!cond.value & otherwise.value),
            locked_true: (cond.locked_true & then.locked_true)
                | (cond.locked_false & otherwise.locked_true)
                | (then.locked_true & otherwise.locked_true),
            locked_false: (cond.locked_true & then.locked_false)
                | (cond.locked_false & otherwise.locked_false)
                | (then.locked_false & otherwise.locked_false),
        }
    }

    pub fn locked(self) -> L {
        self.locked_true | self.locked_false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_lanes_set_and_get() {
        let mut w = 0u64;
        w.set(3, true);
        w.set(63, true);
        assert!(w.get(3) && w.get(63) && !w.get(4));
        w.set(3, false);
        assert_eq!(w, 1 << 63);
        assert_eq!(u64::all().count_ones(), 64);
    }

    #[test]
    fn locks_follow_connectives() {
        let t = Judged::<bool>::constant(true);
        let f = Judged::<bool>::constant(false);
        let p = Judged::<bool>::open(true);
        assert!(p.and(f).locked_false);
        assert!(!p.and(t).locked_true);
        assert!(p.or(t).locked_true);
        assert!(p.implies(t).locked_true);
        assert!(f.implies(p).locked_true);
        assert!(!p.iff(t).locked_true);
        assert!(t.iff(f).locked_false);
        assert!(Judged::ite(p, t, t).locked_true);
    }
}
