use klsp4_padic::{solve_directed_system, PadicError, PrimePower, Residue};

/// A solved hat variable together with the congruences `a x = b` it satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatSolution {
    pub value: Residue,
    pub constraints_used: Vec<(i128, i128)>,
}

impl HatSolution {
    /// Smallest common solution of `constraints` modulo `modulus`, if any.
    pub fn solve(
        constraints: &[(i128, i128)],
        modulus: PrimePower,
    ) -> Result<Option<Self>, PadicError> {
        Ok(
            solve_directed_system(constraints, modulus)?.map(|value| HatSolution {
                value,
                constraints_used: constraints.to_vec(),
            }),
        )
    }

    pub fn verify(&self) -> bool {
        let m = self.value.modulus();
        let x = self.value.value() as i128;
        self.constraints_used
            .iter()
            .all(|&(a, b)| m.reduce(a * x - b) == 0)
    }

    pub fn get(&self) -> i128 {
        self.value.value() as i128
    }
}
