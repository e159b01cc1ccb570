use klsp4_explicit::{kl, ExplicitError};
use klsp4_group::{
    build_cell_matrix, q_int, root_subgroup_data, CellParams, CharacterPair, KloostermanValue,
    RationalMatrix, Root, Q,
};
use klsp4_padic::CyclotomicTally;
use num_traits::{One, Zero};

/// An entry `a + b tau` of a matrix over `Q[tau]` truncated at degree one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Affine {
    a: Q,
    b: Q,
}

fn affine_product(x: &[[Affine; 4]; 4], y: &RationalMatrix) -> [[Affine; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4).fold(Affine::default(), |acc, k| Affine {
                a: acc.a + x[i][k].a * y.get(k, j),
                b: acc.b + x[i][k].b * y.get(k, j),
            })
        })
    })
}

fn left_product(y: &RationalMatrix, x: &[[Affine; 4]; 4]) -> [[Affine; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..4).fold(Affine::default(), |acc, k| Affine {
                a: acc.a + y.get(i, k) * x[k][j].a,
                b: acc.b + y.get(i, k) * x[k][j].b,
            })
        })
    })
}

/// `x_root(tau)` with `tau` formal.
fn formal_root_element(root: Root) -> [[Affine; 4]; 4] {
    let mut m: [[Affine; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| Affine {
            a: if i == j { Q::one() } else { Q::zero() },
            b: Q::zero(),
        })
    });
    let one = Q::one();
    match root {
        Root::Alpha => {
            m[0][1].b = one;
            m[3][2].b = -one;
        }
        Root::Beta => m[1][3].b = one,
        Root::AlphaBeta => {
            m[0][3].b = one;
            m[1][2].b = one;
        }
        Root::TwoAlphaBeta => m[0][2].b = one,
    }
    m
}

/// For one root `rho` of `Ū_n`: `psi(n x_rho(tau) n^{-1}) = e(tau (c_m . m))` and
/// `psi'(x_rho(tau)) = e(tau (c_n . n))`; the criterion is `c_m . m = c_n . n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootFlow {
    pub root: Root,
    /// Coefficients of `(m1, m2)`.
    pub m_coeffs: [Q; 2],
    /// Coefficients of `(n1, n2)`.
    pub n_coeffs: [Q; 2],
}

impl RootFlow {
    pub fn holds(&self, ch: &CharacterPair) -> bool {
        let lhs = self.m_coeffs[0] * q_int(ch.m1 as i128) + self.m_coeffs[1] * q_int(ch.m2 as i128);
        let rhs = self.n_coeffs[0] * q_int(ch.n1 as i128) + self.n_coeffs[1] * q_int(ch.n2 as i128);
        lhs == rhs
    }

    pub fn is_vacuous(&self) -> bool {
        self.m_coeffs.iter().chain(&self.n_coeffs).all(Q::is_zero)
    }
}

pub fn ubar_root_flows(c: &CellParams) -> Vec<RootFlow> {
    let n = build_cell_matrix(c);
    let ni = n.inverse().expect("cell matrices are invertible");
    let (_, kept) = root_subgroup_data(c.w());
    kept.into_iter()
        .map(|root| {
            let conj = left_product(&n, &affine_product(&formal_root_element(root), &ni));
            let unit = |r: Root| if r == root { Q::one() } else { Q::zero() };
            RootFlow {
                root,
                m_coeffs: [conj[0][1].b, conj[1][3].b],
                n_coeffs: [unit(Root::Alpha), unit(Root::Beta)],
            }
        })
        .collect()
}

/// The conjunction of the non-vacuous flows of a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinednessCondition {
    pub cell: CellParams,
    pub flows: Vec<RootFlow>,
}

impl WellDefinednessCondition {
    pub fn of(c: &CellParams) -> Self {
        WellDefinednessCondition {
            cell: *c,
            flows: ubar_root_flows(c)
                .into_iter()
                .filter(|f| !f.is_vacuous())
                .collect(),
        }
    }

    pub fn holds(&self, ch: &CharacterPair) -> bool {
        self.flows.iter().all(|f| f.holds(ch))
    }
}

pub fn is_well_defined(c: &CellParams, ch: &CharacterPair) -> bool {
    WellDefinednessCondition::of(c).holds(ch)
}

/// The auxiliary sum: `Kl_p` when well-defined, zero otherwise.
pub fn aux_kl(c: &CellParams, ch: &CharacterPair) -> Result<KloostermanValue, ExplicitError> {
    if is_well_defined(c, ch) {
        kl(c, ch)
    } else {
        Ok(KloostermanValue {
            tally: CyclotomicTally::zero(c.p()),
            term_count: 0,
            skipped_unsolvable: 0,
        })
    }
}
