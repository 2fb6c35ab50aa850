//! Built-in test signals on `[0,1]^d`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::GridSignal;

/// Position of the jump in [`Signal::StepMix`].
pub const STEP_POSITION: f64 = 0.4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Signal {
    /// `cos(2πx)`, a separable product over the axes.
    #[default]
    Cos,
    /// A quadratic on `[0, 0.4)` followed by a constant, per axis.
    StepMix,
}

impl Signal {
    pub const ALL: [Signal; 2] = [Signal::Cos, Signal::StepMix];

    pub fn name(&self) -> &'static str {
        match self {
            Signal::Cos => "cos",
            Signal::StepMix => "step-mix",
        }
    }

    fn eval_1d(&self, x: f64) -> f64 {
        match self {
            Signal::Cos => (2.0 * PI * x).cos(),
            Signal::StepMix => {
                if x < STEP_POSITION {
                    0.2 + 3.0 * x - 4.0 * x * x
                } else {
                    -0.5
                }
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.eval_1d(t)).product()
    }

    pub fn sample(&self, depth: u32, dim: usize) -> GridSignal {
        GridSignal::from_fn(depth, dim, |x| self.eval(x))
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Signal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cos" => Ok(Signal::Cos),
            "step-mix" | "stepmix" | "step" => Ok(Signal::StepMix),
            _ => Err(Error::Parse(format!("unknown signal '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_values() {
        let g = Signal::Cos.sample(3, 1);
        assert_eq!(g.data()[0], 1.0);
        assert!((g.data()[2]).abs() < 1e-15);
        assert!((g.data()[4] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn separable_in_two_dims() {
        let g = Signal::StepMix.sample(4, 2);
        let line = Signal::StepMix.sample(4, 1);
        for i in 0..16 {
            for j in 0..16 {
                let want = line.data()[i] * line.data()[j];
                assert_eq!(g.data()[i * 16 + j], want);
            }
        }
    }

    #[test]
    fn step_mix_has_one_jump() {
        let s = Signal::StepMix;
        let left = s.eval(&[STEP_POSITION - 1e-9]);
        let right = s.eval(&[STEP_POSITION]);
        assert!((left - right).abs() > 0.5);
        assert_eq!(s.eval(&[0.9]), -0.5);
    }

    #[test]
    fn names_round_trip() {
        for s in Signal::ALL {
            assert_eq!(s.name().parse::<Signal>().unwrap(), s);
        }
        assert!("square".parse::<Signal>().is_err());
    }
}
