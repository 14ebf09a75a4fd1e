//! Coefficient arithmetic: ℤ₂ bits, exact phases in ℚ/ℤ, and doubled
//! pairs carrying the swap action.
//!
//! U(1) is written additively: the phase `p/q` stands for `exp(2πi p/q)`,
//! so products of unitaries become sums and complex conjugation is `neg`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffKind {
    Bit,
    Phase,
}

impl CoeffKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoeffKind::Bit => "bit",
            CoeffKind::Phase => "phase",
        }
    }
}

/// Abelian group structure shared by [`Bit`] and [`Phase`].
pub trait Coefficient:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const KIND: CoeffKind;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
}

/// An element of ℤ₂.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bit(bool);

impl Bit {
    pub const ZERO: Bit = Bit(false);
    pub const ONE: Bit = Bit(true);

    #[inline]
    pub fn is_one(self) -> bool {
        self.0
    }

    /// The canonical integer lift in `{0, 1}`.
    #[inline]
    pub fn as_u8(self) -> u8 {
        self.0 as u8
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// The sign `(-1)^b` as a phase in `{0, 1/2}`.
    #[inline]
    pub fn sign(self) -> Phase {
        if self.0 {
            Phase::HALF
        } else {
            Phase::ZERO
        }
    }
}

impl From<bool> for Bit {
    fn from(b: bool) -> Self {
        Bit(b)
    }
}

impl TryFrom<u64> for Bit {
    type Error = String;
    fn try_from(v: u64) -> Result<Self, String> {
        match v {
            0 => Ok(Bit::ZERO),
            1 => Ok(Bit::ONE),
            _ => Err(format!("bit must be 0 or 1, got {v}")),
        }
    }
}

impl Add for Bit {
    type Output = Bit;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl Sub for Bit {
    type Output = Bit;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Bit) -> Bit {
        Bit(self.0 ^ rhs.0)
    }
}

impl Neg for Bit {
    type Output = Bit;
    #[inline]
    fn neg(self) -> Bit {
        self
    }
}

impl Mul for Bit {
    type Output = Bit;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Bit) -> Bit {
        Bit(self.0 & rhs.0)
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

impl Coefficient for Bit {
    const KIND: CoeffKind = CoeffKind::Bit;
    fn zero() -> Self {
        Bit::ZERO
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl Serialize for Bit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.as_u8())
    }
}

impl<'de> Deserialize<'de> for Bit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = u64::deserialize(d)?;
        Bit::try_from(v).map_err(serde::de::Error::custom)
    }
}

/// An element of ℚ/ℤ, kept as a reduced fraction `num/den` with
/// `0 <= num < den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };
    pub const HALF: Phase = Phase { num: 1, den: 2 };

    /// `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: i128, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let d = den as i128;
        let n = num.rem_euclid(d);
        let g = n.gcd(&d);
        Phase { num: (n / g) as u64, den: (d / g) as u64 }
    }

    /// Strict constructor used by parsers: the fraction must already be
    /// reduced and lie in `[0, 1)`.
    pub fn from_reduced(num: u64, den: u64) -> Result<Phase, String> {
        if den == 0 {
            return Err("denominator must be positive".into());
        }
        if num >= den {
            return Err(format!("{num}/{den} is not in [0, 1)"));
        }
        if num.gcd(&den) != 1 && !(num == 0 && den == 1) {
            return Err(format!("{num}/{den} is not reduced"));
        }
        if num == 0 && den != 1 {
            return Err(format!("zero must be written 0/1, got 0/{den}"));
        }
        Ok(Phase { num, den })
    }

    #[inline]
    pub fn numerator(self) -> u64 {
        self.num
    }

    #[inline]
    pub fn denominator(self) -> u64 {
        self.den
    }

    /// `k·p mod 1`.
    pub fn scale(self, k: i64) -> Phase {
        Phase::new(self.num as i128 * k as i128, self.den)
    }

    /// Some `x` with `p·x = self` (mod 1). The representative chosen is
    /// `num / (den·|p|)`, negated when `p < 0`. Panics if `p == 0`.
    pub fn div_int(self, p: i64) -> Phase {
        assert!(p != 0, "division by zero");
        let den = self
            .den
            .checked_mul(p.unsigned_abs())
            .expect("phase denominator overflow");
        let x = Phase::new(self.num as i128, den);
        if p < 0 {
            -x
        } else {
            x
        }
    }

    /// The numerator `k` of `self = k/modulus`, if the denominator divides
    /// `modulus`.
    pub fn to_units(self, modulus: u64) -> Option<u64> {
        modulus.is_multiple_of(self.den).then(|| self.num * (modulus / self.den))
    }

    pub fn from_units(k: u64, modulus: u64) -> Phase {
        Phase::new(k as i128, modulus)
    }
}

/// `e^{iπk/2}` as a phase, i.e. `k/4 mod 1`.
pub fn lift_quarter(k: i64) -> Phase {
    Phase::new(k as i128, 4)
}

/// `e^{iπk/4}` as a phase, i.e. `k/8 mod 1`.
pub fn lift_eighth(k: i64) -> Phase {
    Phase::new(k as i128, 8)
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        if self.den == rhs.den {
            return Phase::new(self.num as i128 + rhs.num as i128, self.den);
        }
        let g = self.den.gcd(&rhs.den);
        let l = (self.den / g) as u128 * rhs.den as u128;
        let l64 = u64::try_from(l).expect("phase denominator overflow");
        let n = self.num as u128 * (l / self.den as u128) + rhs.num as u128 * (l / rhs.den as u128);
        Phase::new(n as i128, l64)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        if self.num == 0 {
            self
        } else {
            Phase { num: self.den - self.num, den: self.den }
        }
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl Ord for Phase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Phase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| format!("phase {s:?} must have the form \"p/q\""))?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(n) || !digits(d) {
            return Err(format!("phase {s:?} must have the form \"p/q\" with decimal digits"));
        }
        let n: u64 = n.parse().map_err(|e| format!("numerator of {s:?}: {e}"))?;
        let d: u64 = d.parse().map_err(|e| format!("denominator of {s:?}: {e}"))?;
        Phase::from_reduced(n, d)
    }
}

impl Coefficient for Phase {
    const KIND: CoeffKind = CoeffKind::Phase;
    fn zero() -> Self {
        Phase::ZERO
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Component selector `ε ∈ {+1, −1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eps {
    Plus,
    Minus,
}

impl Eps {
    pub const BOTH: [Eps; 2] = [Eps::Plus, Eps::Minus];

    pub fn flip(self) -> Eps {
        match self {
            Eps::Plus => Eps::Minus,
            Eps::Minus => Eps::Plus,
        }
    }

    /// `(−1)^b · ε`.
    pub fn twist(self, b: Bit) -> Eps {
        if b.is_one() {
            self.flip()
        } else {
            self
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Eps::Plus => 1,
            Eps::Minus => -1,
        }
    }
}

/// An element `(plus, minus)` of `A ⊕ A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Doubled<T> {
    pub plus: T,
    pub minus: T,
}

impl<T: Copy> Doubled<T> {
    pub fn new(plus: T, minus: T) -> Self {
        Doubled { plus, minus }
    }

    pub fn diagonal(x: T) -> Self {
        Doubled { plus: x, minus: x }
    }

    #[inline]
    pub fn get(&self, eps: Eps) -> T {
        match eps {
            Eps::Plus => self.plus,
            Eps::Minus => self.minus,
        }
    }

    #[inline]
    pub fn set(&mut self, eps: Eps, v: T) {
        match eps {
            Eps::Plus => self.plus = v,
            Eps::Minus => self.minus = v,
        }
    }

    #[inline]
    pub fn swap(self) -> Self {
        Doubled { plus: self.minus, minus: self.plus }
    }

    /// Applies the swap matrix `e` times: `x ↦ x^{e}`.
    #[inline]
    pub fn swap_pow(self, e: Bit) -> Self {
        if e.is_one() {
            self.swap()
        } else {
            self
        }
    }

    pub fn map<U: Copy>(self, mut f: impl FnMut(T) -> U) -> Doubled<U> {
        Doubled { plus: f(self.plus), minus: f(self.minus) }
    }

    pub fn zip<U: Copy, V: Copy>(self, other: Doubled<U>, mut f: impl FnMut(T, U) -> V) -> Doubled<V> {
        Doubled { plus: f(self.plus, other.plus), minus: f(self.minus, other.minus) }
    }
}

impl<T: Copy + PartialEq> Doubled<T> {
    pub fn is_diagonal(&self) -> bool {
        self.plus == self.minus
    }
}

impl<T: Coefficient> Doubled<T> {
    pub fn zero() -> Self {
        Doubled::diagonal(T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.plus.is_zero() && self.minus.is_zero()
    }
}

impl<T: Coefficient> Add for Doubled<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Doubled { plus: self.plus + rhs.plus, minus: self.minus + rhs.minus }
    }
}

impl<T: Coefficient> Sub for Doubled<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Doubled { plus: self.plus - rhs.plus, minus: self.minus - rhs.minus }
    }
}

impl<T: Coefficient> Neg for Doubled<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Doubled { plus: -self.plus, minus: -self.minus }
    }
}

impl<T: Serialize> Serialize for Doubled<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (&self.plus, &self.minus).serialize(s)
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Doubled<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (plus, minus) = <(T, T)>::deserialize(d)?;
        Ok(Doubled { plus, minus })
    }
}

/// Pointwise product `(x₊y₊, x₋y₋)`, written additively.
pub fn pair_mul<T: Coefficient>(x: Doubled<T>, y: Doubled<T>) -> Doubled<T> {
    x + y
}

pub fn swap_pow<T: Copy>(x: Doubled<T>, e: Bit) -> Doubled<T> {
    x.swap_pow(e)
}

/// `(-1)^x := ((-1)^{x₊}, (-1)^{x₋})`.
pub fn sign_of_bits(x: Doubled<Bit>) -> Doubled<Phase> {
    x.map(Bit::sign)
}

/// Componentwise product of bit pairs, the exponent products in the
/// cocycle conditions.
pub fn bit_dot(x: Doubled<Bit>, y: Doubled<Bit>) -> Doubled<Bit> {
    x.zip(y, |a, b| a * b)
}

/// How a ℤ₂ value is lifted to an integer before entering a quarter or
/// eighth phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftConvention {
    /// `0 ↦ 0, 1 ↦ 1`. Every construction in this crate uses it.
    #[default]
    ZeroOne,
    /// `0 ↦ 0, 1 ↦ −1`; only used as a negative control.
    ZeroMinusOne,
}

impl LiftConvention {
    #[inline]
    pub fn lift(self, b: Bit) -> i64 {
        match self {
            LiftConvention::ZeroOne => b.as_i64(),
            LiftConvention::ZeroMinusOne => -b.as_i64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ph(s: &str) -> Phase {
        s.parse().unwrap()
    }

    #[test]
    fn phase_arithmetic_examples() {
        assert_eq!(ph("1/8") + ph("7/8"), Phase::ZERO);
        assert_eq!(ph("3/8").scale(2), ph("3/4"));
        assert_eq!(-ph("1/4"), ph("3/4"));
        assert_eq!(ph("1/6") + ph("1/4"), ph("5/12"));
        assert_eq!(ph("1/2").scale(-3), ph("1/2"));
        assert_eq!(Phase::new(-2, 8), ph("3/4"));
        assert_eq!(Phase::new(6, 8).denominator(), 4);
    }

    #[test]
    fn div_int_inverts_scale() {
        for s in ["0/1", "1/2", "3/8", "5/12"] {
            let p = ph(s);
            for k in [-4, -3, -1, 1, 2, 3, 6] {
                assert_eq!(p.div_int(k).scale(k), p);
            }
        }
    }

    #[test]
    fn phase_parsing_is_strict() {
        assert!("3/6".parse::<Phase>().is_err());
        assert!("0/4".parse::<Phase>().is_err());
        assert!("5/4".parse::<Phase>().is_err());
        assert!("-1/4".parse::<Phase>().is_err());
        assert!("1/0".parse::<Phase>().is_err());
        assert!("1.5".parse::<Phase>().is_err());
        assert_eq!("0/1".parse::<Phase>().unwrap(), Phase::ZERO);
        assert_eq!(ph("3/8").to_string(), "3/8");
    }

    #[test]
    fn unit_conversion() {
        assert_eq!(ph("3/4").to_units(8), Some(6));
        assert_eq!(ph("1/3").to_units(8), None);
        assert_eq!(Phase::from_units(6, 8), ph("3/4"));
    }

    #[test]
    fn swap_examples() {
        let x = Doubled::new(ph("1/8"), ph("3/8"));
        assert_eq!(swap_pow(x, Bit::ONE), Doubled::new(ph("3/8"), ph("1/8")));
        assert_eq!(swap_pow(x, Bit::ZERO), x);
        let d = Doubled::diagonal(ph("1/4"));
        assert_eq!(swap_pow(d, Bit::ONE), d);
        let b = Doubled::new(Bit::ZERO, Bit::ONE);
        assert_eq!(swap_pow(b, Bit::ONE), Doubled::new(Bit::ONE, Bit::ZERO));
    }

    #[test]
    fn pair_mul_examples() {
        let x = Doubled::new(ph("1/8"), ph("1/4"));
        let y = Doubled::new(ph("1/8"), ph("3/4"));
        assert_eq!(pair_mul(x, y), Doubled::new(ph("1/4"), Phase::ZERO));
        assert_eq!(pair_mul(x, Doubled::zero()), x);
        let b = pair_mul(Doubled::new(Bit::ONE, Bit::ZERO), Doubled::new(Bit::ONE, Bit::ONE));
        assert_eq!(b, Doubled::new(Bit::ZERO, Bit::ONE));
    }

    #[test]
    fn sign_and_dot_examples() {
        let (o, i) = (Bit::ZERO, Bit::ONE);
        assert_eq!(sign_of_bits(Doubled::new(o, o)), Doubled::zero());
        assert_eq!(sign_of_bits(Doubled::new(i, o)), Doubled::new(Phase::HALF, Phase::ZERO));
        assert_eq!(sign_of_bits(Doubled::new(i, i)), Doubled::diagonal(Phase::HALF));
        assert_eq!(bit_dot(Doubled::new(i, o), Doubled::new(i, i)), Doubled::new(i, o));
        assert_eq!(bit_dot(Doubled::new(i, i), Doubled::new(o, o)), Doubled::new(o, o));
        assert_eq!(bit_dot(Doubled::new(i, i), Doubled::new(i, i)), Doubled::new(i, i));
    }

    #[test]
    fn lifts() {
        assert_eq!(lift_quarter(1), ph("1/4"));
        assert_eq!(lift_quarter(-1), ph("3/4"));
        assert_eq!(lift_eighth(-2), ph("3/4"));
        assert_eq!(LiftConvention::ZeroOne.lift(Bit::ONE), 1);
        assert_eq!(LiftConvention::ZeroMinusOne.lift(Bit::ONE), -1);
    }

    #[test]
    fn eps_twist() {
        assert_eq!(Eps::Plus.twist(Bit::ONE), Eps::Minus);
        assert_eq!(Eps::Minus.twist(Bit::ZERO), Eps::Minus);
        let x = Doubled::new(1u8, 2u8);
        assert_eq!(x.get(Eps::Plus.twist(Bit::ONE)), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn phase() -> impl Strategy<Value = Phase> {
            (0i64..1000, prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12, 16, 24]))
                .prop_map(|(n, d)| Phase::new(n as i128, d))
        }

        fn bits() -> impl Strategy<Value = Doubled<Bit>> {
            (any::<bool>(), any::<bool>()).prop_map(|(a, b)| Doubled::new(Bit::from(a), Bit::from(b)))
        }

        proptest! {
            #[test]
            fn phases_form_an_abelian_group(p in phase(), q in phase(), r in phase()) {
                prop_assert_eq!(p + q, q + p);
                prop_assert_eq!((p + q) + r, p + (q + r));
                prop_assert_eq!(p + (-p), Phase::ZERO);
                prop_assert_eq!(p + Phase::ZERO, p);
                prop_assert_eq!(p.numerator().gcd(&p.denominator()), 1);
            }

            #[test]
            fn swap_is_an_action(x in bits(), e1 in any::<bool>(), e2 in any::<bool>()) {
                let (e1, e2) = (Bit::from(e1), Bit::from(e2));
                prop_assert_eq!(swap_pow(x, e1 + e2), swap_pow(swap_pow(x, e2), e1));
                prop_assert_eq!(swap_pow(swap_pow(x, Bit::ONE), Bit::ONE), x);
            }

            #[test]
            fn sign_is_a_homomorphism(x in bits(), y in bits()) {
                prop_assert_eq!(sign_of_bits(x + y), pair_mul(sign_of_bits(x), sign_of_bits(y)));
            }
        }
    }
}
