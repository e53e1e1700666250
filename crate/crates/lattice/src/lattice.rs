use crate::elem::{s_elem, translation, Elem, LatticeKind};
use serde::Serialize;

/// Cusp data: the vectors `v_j = g_j^{-1} e_1` and, for the irreducible
/// lattice, representatives `Xi` used in the wedge height.
#[derive(Clone, Debug, Serialize)]
pub struct CuspData {
    pub vectors: Vec<[f64; 2]>,
    pub xi: Vec<Elem>,
}

/// One of the three built-in arithmetic lattices.
#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub generators: Vec<Elem>,
    pub cusps: CuspData,
}

impl Lattice {
    pub fn new(kind: LatticeKind) -> Self {
        let generators = match kind {
            // T, T_i, S, L = diag(-i, i).
            LatticeKind::GaussianIntegers => vec![
                translation(kind, 1, 0),
                translation(kind, 0, 1),
                s_elem(kind),
                Elem([0, -1, 0, 0, 0, 0, 0, 1]).normalized(kind),
            ],
            LatticeKind::ZxZ => vec![
                Elem([0, -1, 1, 0, 1, 0, 0, 1]).normalized(kind),
                Elem([1, 1, 0, 1, 1, 0, 0, 1]),
                Elem([1, 0, 0, 1, 0, -1, 1, 0]).normalized(kind),
                Elem([1, 0, 0, 1, 1, 1, 0, 1]),
            ],
            // T, T_sqrt2, S, diag(eps, eps^-1) with eps = 1 + sqrt 2.
            LatticeKind::ZSqrt2 => vec![
                translation(kind, 1, 0),
                translation(kind, 0, 1),
                s_elem(kind),
                Elem([1, 1, 0, 0, 0, 0, -1, 1]),
            ],
        };
        // Class number one in all three cases: a single cusp at infinity.
        let cusps = CuspData { vectors: vec![[1.0, 0.0]], xi: vec![Elem::identity(kind)] };
        Lattice { kind, generators, cusps }
    }

    /// Generators together with their inverses, deduplicated.
    pub fn symmetric_generators(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self
            .generators
            .iter()
            .flat_map(|g| [*g, g.inv(self.kind)])
            .collect();
        v.sort();
        v.dedup();
        v
    }
}
