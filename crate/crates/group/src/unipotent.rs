use klsp4_padic::{FractionModOne, PadicError};
use num_traits::Zero;

use crate::{frac_mod_one, RationalMatrix, Root, Q};

/// Root coordinates of an element of `U(Q_p)`: `x_alpha` at (1,2),
/// `x_two_alpha_beta` at (1,3), `x_alpha_beta` at (1,4) and `x_beta` at (2,4).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UnipotentCoords {
    pub x_alpha: Q,
    pub x_alpha_beta: Q,
    pub x_two_alpha_beta: Q,
    pub x_beta: Q,
}

impl UnipotentCoords {
    pub fn new(x_alpha: Q, x_alpha_beta: Q, x_two_alpha_beta: Q, x_beta: Q) -> Self {
        UnipotentCoords {
            x_alpha,
            x_alpha_beta,
            x_two_alpha_beta,
            x_beta,
        }
    }

    pub fn get(&self, root: Root) -> &Q {
        match root {
            Root::Alpha => &self.x_alpha,
            Root::Beta => &self.x_beta,
            Root::AlphaBeta => &self.x_alpha_beta,
            Root::TwoAlphaBeta => &self.x_two_alpha_beta,
        }
    }

    pub fn get_mut(&mut self, root: Root) -> &mut Q {
        match root {
            Root::Alpha => &mut self.x_alpha,
            Root::Beta => &mut self.x_beta,
            Root::AlphaBeta => &mut self.x_alpha_beta,
            Root::TwoAlphaBeta => &mut self.x_two_alpha_beta,
        }
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        let (a1, a2, a3, a5) = (
            self.x_alpha,
            self.x_two_alpha_beta,
            self.x_alpha_beta,
            self.x_beta,
        );
        let mut m = RationalMatrix::identity();
        m.0[0][1] = a1;
        m.0[0][2] = a2;
        m.0[0][3] = a3;
        m.0[1][2] = a3 - a1 * a5;
        m.0[1][3] = a5;
        m.0[3][2] = -a1;
        m
    }

    /// Reads the coordinates back, or `None` if `m` is not in `U`.
    pub fn from_matrix(m: &RationalMatrix) -> Option<Self> {
        let u = UnipotentCoords::new(m.0[0][1], m.0[0][3], m.0[0][2], m.0[1][3]);
        (u.to_matrix() == *m).then_some(u)
    }

    pub fn is_zero(&self) -> bool {
        Root::ALL.iter().all(|r| self.get(*r).is_zero())
    }
}

/// `x_root(k)`: the one-parameter subgroup of `root` at `k`.
pub fn root_element(root: Root, k: Q) -> RationalMatrix {
    let mut u = UnipotentCoords::default();
    *u.get_mut(root) = k;
    u.to_matrix()
}

/// `psi_{m1,m2}(u) = e(m1 x_alpha + m2 x_beta)` as a phase in `Q_p / Z_p`.
pub fn psi_value(
    u: &UnipotentCoords,
    m1: i64,
    m2: i64,
    p: u64,
) -> Result<FractionModOne, PadicError> {
    let arg = u.x_alpha * Q::from_integer(m1 as i128) + u.x_beta * Q::from_integer(m2 as i128);
    frac_mod_one(&arg, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn assembled_matrices_are_symplectic() {
        let u = UnipotentCoords::new(q(1, 3), q(2, 9), q(-5, 27), q(7, 3));
        let m = u.to_matrix();
        assert!(m.is_symplectic());
        assert_eq!(UnipotentCoords::from_matrix(&m), Some(u));
        for root in Root::ALL {
            assert!(root_element(root, q(1, 2)).is_symplectic());
        }
    }

    #[test]
    fn character_values() {
        let zero = UnipotentCoords::default();
        assert!(psi_value(&zero, 3, 4, 3).unwrap().is_zero());
        let u = UnipotentCoords::new(q(1, 5), Q::zero(), Q::zero(), Q::zero());
        assert!(psi_value(&u, 5, 0, 5).unwrap().is_zero());
        let u = UnipotentCoords::new(q(1, 3), Q::zero(), Q::zero(), q(2, 3));
        assert!(psi_value(&u, 1, 1, 3).unwrap().is_zero());
        assert_eq!(
            psi_value(&u, 1, 0, 3).unwrap(),
            FractionModOne::new(1, 1, 3)
        );
    }

    #[test]
    fn non_unipotent_is_rejected() {
        let mut m = RationalMatrix::identity();
        m.0[3][2] = q(1, 1);
        assert_eq!(UnipotentCoords::from_matrix(&m), None);
    }
}
