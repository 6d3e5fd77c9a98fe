//! Working-precision configuration shared by every floating computation.
//!
//! A [`PrecisionContext`] fixes the number of decimal digits the caller wants
//! back plus a number of guard digits carried internally. It owns the
//! constants needed everywhere (π, Euler's γ) and two caches that are keyed
//! by quantities which are deterministic functions of the context: Bessel
//! values at quadrature nodes and finished moments. Cloning a context shares
//! the caches.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rug::float::Constant;
use rug::Float;

use crate::bessel::ScaledBessel;
use crate::error::{Error, Result};
use crate::quadrature::{MomentKey, MomentResult};

pub const DEFAULT_TARGET_DIGITS: u32 = 50;
pub const DEFAULT_GUARD_DIGITS: u32 = 15;
pub const DEFAULT_MAX_LEVEL: u32 = 12;
pub const MIN_TARGET_DIGITS: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Identifies a quadrature abscissa independently of the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct NodeKey {
    pub segment: u8,
    pub split_bits: u64,
    pub index: i64,
}

#[derive(Debug)]
struct Shared {
    bits: u32,
    pi: Float,
    euler: Float,
    nodes: RwLock<HashMap<NodeKey, Arc<ScaledBessel>>>,
    moments: RwLock<HashMap<MomentKey, MomentResult>>,
}

#[derive(Clone, Debug)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    max_level: u32,
    shared: Arc<Shared>,
}

impl PrecisionContext {
    pub fn new(target_digits: u32) -> Result<Self> {
        Self::with_digits(target_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_digits(target_digits: u32, guard_digits: u32) -> Result<Self> {
        if target_digits < MIN_TARGET_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "target_digits must be at least {MIN_TARGET_DIGITS}, got {target_digits}"
            )));
        }
        if guard_digits == 0 {
            return Err(Error::InvalidPrecision(
                "guard_digits must be positive".into(),
            ));
        }
        if target_digits.saturating_add(guard_digits) > 100_000 {
            return Err(Error::InvalidPrecision(format!(
                "{target_digits}+{guard_digits} digits is beyond the supported range"
            )));
        }
        let working = f64::from(target_digits + guard_digits);
        let bits = (working * LOG2_10).ceil() as u32 + 8;
        let shared = Shared {
            bits,
            pi: Float::with_val(bits, Constant::Pi),
            euler: Float::with_val(bits, Constant::Euler),
            nodes: RwLock::new(HashMap::new()),
            moments: RwLock::new(HashMap::new()),
        };
        Ok(Self {
            target_digits,
            guard_digits,
            max_level: DEFAULT_MAX_LEVEL,
            shared: Arc::new(shared),
        })
    }

    /// Caps the number of quadrature refinement levels.
    pub fn with_max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level.clamp(3, 20);
        self
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Binary precision of every working-precision `Float`.
    pub fn bits(&self) -> u32 {
        self.shared.bits
    }

    pub fn pi(&self) -> &Float {
        &self.shared.pi
    }

    pub fn euler_gamma(&self) -> &Float {
        &self.shared.euler
    }

    pub fn float<T>(&self, val: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), val)
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    /// Unit roundoff 2^(1-bits).
    pub fn epsilon(&self) -> Float {
        Float::with_val(self.bits(), 1) >> (self.bits() - 1)
    }

    /// 10^(-digits) at working precision.
    pub fn ten_pow_neg(&self, digits: u32) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        Float::with_val(self.bits(), rug::ops::Pow::pow(&ten, -(digits as i32)))
    }

    /// Relative accuracy the returned values must meet.
    pub fn target_tolerance(&self) -> Float {
        self.ten_pow_neg(self.target_digits)
    }

    /// Relative accuracy quadrature refinement aims for; half of the guard
    /// digits stay in reserve for error-estimate slack.
    pub fn quadrature_tolerance(&self) -> Float {
        self.ten_pow_neg(self.target_digits + self.guard_digits / 2)
    }

    pub(crate) fn cached_node(&self, key: &NodeKey) -> Option<Arc<ScaledBessel>> {
        self.shared
            .nodes
            .read()
            .ok()
            .and_then(|m| m.get(key).cloned())
    }

    pub(crate) fn store_node(&self, key: NodeKey, value: Arc<ScaledBessel>) {
        if let Ok(mut m) = self.shared.nodes.write() {
            m.insert(key, value);
        }
    }

    pub(crate) fn cached_moment(&self, key: &MomentKey) -> Option<MomentResult> {
        self.shared
            .moments
            .read()
            .ok()
            .and_then(|m| m.get(key).cloned())
    }

    pub(crate) fn store_moment(&self, key: MomentKey, value: MomentResult) {
        if let Ok(mut m) = self.shared.moments.write() {
            m.insert(key, value);
        }
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_TARGET_DIGITS).expect("default precision is valid")
    }
}
