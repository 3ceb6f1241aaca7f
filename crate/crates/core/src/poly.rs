use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, rat, Rational};

/// Univariate polynomial with rational coefficients, stored lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// From integer coefficients listed highest degree first, the way they
    /// are usually written down.
    pub fn from_descending(cs: &[i64]) -> Self {
        Self::new(cs.iter().rev().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn x() -> Self {
        Self::new(vec![rat(0), rat(1)])
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Discriminant of a quadratic; `None` for other degrees.
    pub fn quadratic_discriminant(&self) -> Option<Rational> {
        (self.degree() == Some(2)).then(|| {
            let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
            b * b - rat(4) * a * c
        })
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&format_rational(&mag));
            }
            match i {
                0 => {}
                1 => out.push_str(&format!("{}{var}", if show_coeff { "*" } else { "" })),
                _ => out.push_str(&format!("{}{var}^{i}", if show_coeff { "*" } else { "" })),
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_display() {
        let p = Polynomial::from_descending(&[1, -1512, 374784]);
        assert_eq!(p.eval(&rat(-3375)), rat(3375 * 3375 + 1512 * 3375 + 374784));
        assert_eq!(p.display_in("j"), "j^2 - 1512*j + 374784");
        assert_eq!(Polynomial::from_descending(&[0, 0]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::from_descending(&[1, 24]);
        let b = Polynomial::from_descending(&[1, -24]);
        assert_eq!(a.mul(&b), Polynomial::from_descending(&[1, 0, -576]));
        assert_eq!(a.add(&b.scale(&rat(-1))), Polynomial::constant(rat(48)));
        assert_eq!(a.mul(&b).quadratic_discriminant(), Some(rat(4 * 576)));
    }
}
