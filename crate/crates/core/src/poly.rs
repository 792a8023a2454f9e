//! Linear polynomial interpretations over the naturals, with optional
//! negative constants in weak mode.
//!
//! The term semantics clamps every application node at zero:
//! `[[f(t1..tn)]] = max(0, c0 + sum ci * [[ti]])`. That semantics is not
//! linear, so orientation works with a pair of linear bounds instead:
//! [`lower_poly`] never exceeds the clamped value and [`upper_poly`] never
//! falls below it. A rule is oriented when `lower(lhs) - upper(rhs)` is
//! absolutely positive (all variable coefficients nonnegative and the
//! constant at least 0, or 1 for a strict decrease).
//!
//! Everything here is generic over the coefficient scalar; the certifier
//! instantiates it with the crate-level [`crate::Coeff`] alias.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::term::{Rule, Symbol, Term};

/// Scalar type of interpretation coefficients and constants. Arithmetic is
/// checked so that a certificate can never be accepted through wraparound.
pub trait Coefficient:
    Clone + Ord + fmt::Debug + fmt::Display + Zero + One + Signed + CheckedAdd + CheckedSub + CheckedMul
{
}

impl<T> Coefficient for T where
    T: Clone
        + Ord
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
{
}

/// Coefficient arithmetic left the representable range. The shipped
/// certifier uses an arbitrary-precision scalar, for which this never
/// fires; fixed-width instantiations abort instead of wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow during polynomial arithmetic")]
pub struct ArithOverflow;

/// Strict interpretations orient rule removal, weak ones pair removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Weak,
}

/// A linear polynomial `const + sum coeff(x) * x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPoly<C> {
    pub constant: C,
    pub coeffs: BTreeMap<String, C>,
}

impl<C: Coefficient> LinearPoly<C> {
    pub fn constant(value: C) -> Self {
        LinearPoly { constant: value, coeffs: BTreeMap::new() }
    }

    pub fn variable(name: String) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name, C::one());
        LinearPoly { constant: C::zero(), coeffs }
    }

    /// Coefficient of a variable; zero if absent.
    pub fn coeff(&self, var: &str) -> C {
        self.coeffs.get(var).cloned().unwrap_or_else(C::zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithOverflow> {
        let constant = self
            .constant
            .checked_add(&other.constant)
            .ok_or(ArithOverflow)?;
        let mut coeffs = self.coeffs.clone();
        for (var, c) in &other.coeffs {
            let entry = coeffs.entry(var.clone()).or_insert_with(C::zero);
            *entry = entry.checked_add(c).ok_or(ArithOverflow)?;
        }
        Ok(LinearPoly { constant, coeffs }.dropping_zeros())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithOverflow> {
        let constant = self
            .constant
            .checked_sub(&other.constant)
            .ok_or(ArithOverflow)?;
        let mut coeffs = self.coeffs.clone();
        for (var, c) in &other.coeffs {
            let entry = coeffs.entry(var.clone()).or_insert_with(C::zero);
            *entry = entry.checked_sub(c).ok_or(ArithOverflow)?;
        }
        Ok(LinearPoly { constant, coeffs }.dropping_zeros())
    }

    pub fn checked_scale(&self, factor: &C) -> Result<Self, ArithOverflow> {
        let constant = self.constant.checked_mul(factor).ok_or(ArithOverflow)?;
        let mut coeffs = BTreeMap::new();
        for (var, c) in &self.coeffs {
            coeffs.insert(var.clone(), c.checked_mul(factor).ok_or(ArithOverflow)?);
        }
        Ok(LinearPoly { constant, coeffs }.dropping_zeros())
    }

    fn dropping_zeros(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    /// Evaluates the polynomial literally (no clamping).
    pub fn eval(&self, assignment: &BTreeMap<String, C>) -> Result<C, ArithOverflow> {
        let mut acc = self.constant.clone();
        for (var, c) in &self.coeffs {
            let value = assignment.get(var).cloned().unwrap_or_else(C::zero);
            acc = acc
                .checked_add(&c.checked_mul(&value).ok_or(ArithOverflow)?)
                .ok_or(ArithOverflow)?;
        }
        Ok(acc)
    }
}

impl<C: Coefficient> fmt::Display for LinearPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (var, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{}", var)?;
            } else {
                write!(f, "{}*{}", c, var)?;
            }
        }
        if first || !self.constant.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// The interpretation of one symbol: `c0 + c1*x1 + ... + cn*xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInterpretation<C> {
    pub symbol: Symbol,
    pub constant: C,
    pub arg_coeffs: Vec<C>,
}

impl<C> SymbolInterpretation<C> {
    pub fn new(symbol: Symbol, constant: C, arg_coeffs: Vec<C>) -> Self {
        assert_eq!(
            symbol.arity,
            arg_coeffs.len(),
            "coefficient count must equal the arity of {}",
            symbol
        );
        SymbolInterpretation { symbol, constant, arg_coeffs }
    }
}

/// A full interpretation: per-symbol entries plus a mode. Symbols without
/// an entry default to `0 + x1 + ... + xn`, which is monotone in both
/// modes; a certificate relying on the default is still checked like any
/// other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInterpretation<C> {
    pub mode: Mode,
    pub entries: Vec<SymbolInterpretation<C>>,
}

/// A monotonicity violation: the offending symbol, plus the 1-based
/// argument position of a bad coefficient or `None` for a bad constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub symbol: Symbol,
    pub argument: Option<usize>,
}

impl fmt::Display for MonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.argument {
            Some(i) => write!(
                f,
                "interpretation of {} is not monotone in argument {}",
                self.symbol, i
            ),
            None => write!(
                f,
                "interpretation of {} has a negative constant",
                self.symbol
            ),
        }
    }
}

impl<C: Coefficient> LinearInterpretation<C> {
    pub fn new(mode: Mode, entries: Vec<SymbolInterpretation<C>>) -> Self {
        LinearInterpretation { mode, entries }
    }

    pub fn entry(&self, symbol: &Symbol) -> Option<&SymbolInterpretation<C>> {
        self.entries.iter().find(|e| &e.symbol == symbol)
    }

    fn coeffs_for(&self, symbol: &Symbol) -> (C, Cow<'_, [C]>) {
        match self.entry(symbol) {
            Some(e) => (e.constant.clone(), Cow::Borrowed(e.arg_coeffs.as_slice())),
            None => (C::zero(), Cow::Owned(vec![C::one(); symbol.arity])),
        }
    }

    /// Strict mode: every coefficient at least 1 and every constant at
    /// least 0. Weak mode: every coefficient at least 0. Entries are
    /// checked in order, arguments before the constant; the first
    /// violation is reported.
    pub fn check_monotonicity(&self) -> Result<(), MonotonicityViolation> {
        for entry in &self.entries {
            let coeff_floor = match self.mode {
                Mode::Strict => C::one(),
                Mode::Weak => C::zero(),
            };
            for (i, coeff) in entry.arg_coeffs.iter().enumerate() {
                if *coeff < coeff_floor {
                    return Err(MonotonicityViolation {
                        symbol: entry.symbol.clone(),
                        argument: Some(i + 1),
                    });
                }
            }
            if self.mode == Mode::Strict && entry.constant < C::zero() {
                return Err(MonotonicityViolation {
                    symbol: entry.symbol.clone(),
                    argument: None,
                });
            }
        }
        Ok(())
    }
}

/// A linear lower bound of the clamped term value: variables map to
/// themselves, applications to `c0 + sum ci * lower(ti)` without clamping.
pub fn lower_poly<C: Coefficient>(
    term: &Term,
    interp: &LinearInterpretation<C>,
) -> Result<LinearPoly<C>, ArithOverflow> {
    match term {
        Term::Var(name) => Ok(LinearPoly::variable(name.clone())),
        Term::Fun(symbol, args) => {
            let (constant, coeffs) = interp.coeffs_for(symbol);
            let mut acc = LinearPoly::constant(constant);
            for (coeff, arg) in coeffs.iter().zip(args) {
                let arg_poly = lower_poly(arg, interp)?;
                acc = acc.checked_add(&arg_poly.checked_scale(coeff)?)?;
            }
            Ok(acc)
        }
    }
}

/// A linear upper bound of the clamped term value: like [`lower_poly`] but
/// with the node constant clamped at zero, which keeps the resulting
/// constant nonnegative at every node.
pub fn upper_poly<C: Coefficient>(
    term: &Term,
    interp: &LinearInterpretation<C>,
) -> Result<LinearPoly<C>, ArithOverflow> {
    match term {
        Term::Var(name) => Ok(LinearPoly::variable(name.clone())),
        Term::Fun(symbol, args) => {
            let (constant, coeffs) = interp.coeffs_for(symbol);
            let clamped = if constant < C::zero() { C::zero() } else { constant };
            let mut acc = LinearPoly::constant(clamped);
            for (coeff, arg) in coeffs.iter().zip(args) {
                let arg_poly = upper_poly(arg, interp)?;
                acc = acc.checked_add(&arg_poly.checked_scale(coeff)?)?;
            }
            Ok(acc)
        }
    }
}

/// Orients a rule: `lower(lhs) - upper(rhs)` must have all variable
/// coefficients nonnegative and a constant of at least 0 (weak) or 1
/// (strict). Sound with respect to the clamped semantics by the bound
/// guarantees; callers must have checked monotonicity first.
pub fn orient<C: Coefficient>(
    rule: &Rule,
    interp: &LinearInterpretation<C>,
    required: Mode,
) -> Result<bool, ArithOverflow> {
    let lhs = lower_poly(&rule.lhs, interp)?;
    let rhs = upper_poly(&rule.rhs, interp)?;
    let diff = lhs.checked_sub(&rhs)?;
    if diff.coeffs.values().any(|c| *c < C::zero()) {
        return Ok(false);
    }
    let floor = match required {
        Mode::Strict => C::one(),
        Mode::Weak => C::zero(),
    };
    Ok(diff.constant >= floor)
}
