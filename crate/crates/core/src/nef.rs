//! Nef-partitions, their duals, irreducibility and the interior vectors
//! `vᵢ`, `wᵢ`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::polyhedron::Halfspace;
use crate::geometry::{dot, q, qvec, to_i64, Polyhedron, Polytope, QVec, Rational, Role};

/// An ordered Minkowski decomposition `Δ = Δ⁽¹⁾ + ⋯ + Δ⁽ʳ⁾`.
///
/// The same type carries the dual partition `∇⁽¹⁾,…,∇⁽ʳ⁾` with the role tag
/// flipped, so every construction below runs unchanged on either side.
#[derive(Debug, Clone)]
pub struct NefPartition {
    dim: usize,
    parts: Vec<Polytope>,
    sum: Polytope,
    union_hull: Polytope,
}

/// One named pass/fail check with a short explanation.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub dual: Option<NefPartition>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// 1-based part labels of a proper subset whose sum has `0` in its
    /// relative interior.
    Reducible { witness: Vec<usize> },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

#[derive(Debug, Clone)]
pub struct InteriorVectors {
    pub v: Vec<QVec>,
    pub w: Vec<QVec>,
}

impl NefPartition {
    /// Builds the parts and the cached sum and union hull. No validity checks
    /// beyond dimensions; see [`NefPartition::validate`].
    pub fn new(dim: usize, parts: &[Vec<Vec<i64>>], role: Role) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Input("at least one part is required".into()));
        }
        let mut polys = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            if p.iter().any(|v| v.len() != dim) {
                return Err(Error::Input(format!("part {} has a point of the wrong dimension", i + 1)));
            }
            polys.push(Polytope::from_integer_points(p, role)?);
        }
        Self::from_polytopes(dim, polys)
    }

    pub fn from_polytopes(dim: usize, parts: Vec<Polytope>) -> Result<Self> {
        let refs: Vec<&Polytope> = parts.iter().collect();
        let sum = Polytope::minkowski_sum_all(&refs)?;
        let union_hull = Polytope::convex_union(&refs)?;
        Ok(NefPartition { dim, parts, sum, union_hull })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    pub fn role(&self) -> Role {
        self.sum.role()
    }

    pub fn parts(&self) -> &[Polytope] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Polytope {
        &self.parts[i]
    }

    /// `Δ = Σ Δ⁽ⁱ⁾`.
    pub fn sum(&self) -> &Polytope {
        &self.sum
    }

    /// `∇∨ = Conv(Δ⁽¹⁾ ∪ ⋯ ∪ Δ⁽ʳ⁾)`.
    pub fn union_hull(&self) -> &Polytope {
        &self.union_hull
    }

    /// `φᵢ(x) = max ⟨v, x⟩` over the vertices of `Δ⁽ⁱ⁾`.
    pub fn support_value(&self, i: usize, x: &[Rational]) -> Rational {
        self.parts[i].support_value(x)
    }

    /// Index of the unique part containing the lattice point `m`, if any.
    pub fn parts_containing(&self, m: &[Rational]) -> Vec<usize> {
        (0..self.r()).filter(|&i| self.parts[i].contains(m)).collect()
    }

    /// The parts `∇⁽ʲ⁾ = Conv{0, x ∈ Δ∨ : φⱼ(x) = 1}`.
    pub fn dual(&self) -> Result<NefPartition> {
        let delta_dual = self.sum.polar_dual()?;
        let d = self.dim;
        let (dual_ineqs, _) = delta_dual.constraints();
        let mut parts = Vec::with_capacity(self.r());
        for (j, part) in self.parts.iter().enumerate() {
            let mut pts: Vec<QVec> = vec![vec![Rational::zero(); d]];
            for y in part.vertices() {
                if y.iter().all(|c| c.is_zero()) {
                    continue;
                }
                // y is the gradient of φⱼ on this piece
                let mut ineqs = dual_ineqs.clone();
                for y2 in part.vertices() {
                    if y2 != y {
                        let n: QVec = y2.iter().zip(y).map(|(a, b)| a - b).collect();
                        ineqs.push(Halfspace::new(n, Rational::zero()));
                    }
                }
                let eq = Halfspace::new(y.clone(), Rational::one());
                if let Some(piece) = Polyhedron::from_constraints(d, &ineqs, &[eq]) {
                    debug_assert!(piece.is_bounded());
                    pts.extend(piece.vertices().iter().cloned());
                }
            }
            let nabla = Polytope::hull(&pts, self.role().dual())?;
            if !nabla.is_lattice_polytope() {
                return Err(Error::InvalidNefPartition(format!(
                    "dual part {} has a non-integral vertex",
                    j + 1
                )));
            }
            parts.push(nabla);
        }
        NefPartition::from_polytopes(d, parts)
    }

    /// Runs all validity checks; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let origin = vec![Rational::zero(); self.dim];
        let missing: Vec<usize> = (0..self.r()).filter(|&i| !self.parts[i].contains(&origin)).map(|i| i + 1).collect();
        checks.push(Check::new(
            "parts_contain_origin",
            missing.is_empty(),
            if missing.is_empty() { "0 ∈ every part".to_string() } else { format!("0 ∉ parts {missing:?}") },
        ));
        let lattice = self.parts.iter().all(|p| p.is_lattice_polytope());
        checks.push(Check::new("parts_are_lattice_polytopes", lattice, ""));

        let full = self.sum.is_full_dimensional();
        let reflexive = full && matches!(self.sum.is_reflexive(), Ok(true));
        checks.push(Check::new(
            "sum_is_reflexive",
            reflexive,
            format!("dim {} of {}", self.sum.dim(), self.dim),
        ));
        if !reflexive || !missing.is_empty() {
            return ValidationReport { checks, dual: None };
        }

        let dual = match self.dual() {
            Ok(d) => d,
            Err(e) => {
                checks.push(Check::new("dual_parts_integral", false, e.to_string()));
                return ValidationReport { checks, dual: None };
            }
        };
        checks.push(Check::new("dual_parts_integral", true, ""));

        // ψⱼ is identified with the support function of ∇⁽ʲ⁾.
        let mut bad = Vec::new();
        for (i, part) in self.parts.iter().enumerate() {
            for m in part.vertices() {
                if m.iter().all(|c| c.is_zero()) {
                    continue;
                }
                for j in 0..self.r() {
                    let want = if i == j { Rational::one() } else { Rational::zero() };
                    if dual.parts[j].support_value(m) != want {
                        bad.push(format!("ψ{}({:?}) ≠ {}", j + 1, to_i64(m), want));
                    }
                }
            }
        }
        checks.push(Check::new(
            "psi_values",
            bad.is_empty(),
            if bad.is_empty() {
                "ψⱼ taken as the support function of ∇⁽ʲ⁾: 1 on nonzero vertices of Δ⁽ʲ⁾, 0 on the other parts".to_string()
            } else {
                bad.join("; ")
            },
        ));

        let delta_dual = self.sum.polar_dual().expect("reflexive");
        checks.push(Check::new(
            "dual_union_is_polar_of_sum",
            dual.union_hull == delta_dual,
            "Δ∨ = Conv(∇⁽¹⁾,…,∇⁽ʳ⁾)",
        ));
        let nabla_ok = dual.sum.is_full_dimensional() && matches!(dual.sum.is_reflexive(), Ok(true));
        checks.push(Check::new("dual_sum_is_reflexive", nabla_ok, ""));
        let second = nabla_ok && dual.sum.polar_dual().map(|p| p == self.union_hull).unwrap_or(false);
        checks.push(Check::new("union_is_polar_of_dual_sum", second, "∇∨ = Conv(Δ⁽¹⁾,…,Δ⁽ʳ⁾)"));

        ValidationReport { checks, dual: Some(dual) }
    }

    /// `⟨Δ⁽ⁱ⁾, ∇⁽ʲ⁾⟩ ≤ δᵢⱼ` on all vertex pairs.
    pub fn pairing_bounded_by_kronecker(&self, dual: &NefPartition) -> bool {
        for (i, a) in self.parts.iter().enumerate() {
            for (j, b) in dual.parts.iter().enumerate() {
                let bound = if i == j { q(1) } else { q(0) };
                for m in a.vertices() {
                    for n in b.vertices() {
                        if dot(m, n) > bound {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Exhaustive search for a proper subset whose sum has `0` in its
    /// relative interior.
    pub fn irreducibility(&self) -> Irreducibility {
        let r = self.r();
        let origin = vec![Rational::zero(); self.dim];
        for mask in 1u32..(1u32 << r) - 1 {
            let idx: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let refs: Vec<&Polytope> = idx.iter().map(|&i| &self.parts[i]).collect();
            let s = Polytope::minkowski_sum_all(&refs).expect("same role");
            if s.contains_in_relative_interior(&origin) {
                return Irreducibility::Reducible { witness: idx.iter().map(|i| i + 1).collect() };
            }
        }
        Irreducibility::Irreducible
    }

    /// Strictly positive weights on the nonzero part vertices with barycenter
    /// `0`, grouped by part.
    fn positive_split(&self) -> Result<Vec<QVec>> {
        let d = self.dim;
        let mut owner = Vec::new();
        let mut pts: Vec<QVec> = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.vertices() {
                if v.iter().any(|c| !c.is_zero()) {
                    owner.push(i);
                    pts.push(v.clone());
                }
            }
        }
        let n = pts.len();
        if n == 0 {
            return Err(Error::OriginNotInterior);
        }
        let mut k: u64 = (n as u64).next_power_of_two();
        while k <= 1 << 24 {
            let inv_k = Rational::new(1.into(), k.into());
            // λ = 1/K + μ with μ ≥ 0
            let ineqs: Vec<Halfspace> = (0..n)
                .map(|a| {
                    let mut e = vec![Rational::zero(); n];
                    e[a] = -Rational::one();
                    Halfspace::new(e, Rational::zero())
                })
                .collect();
            let mut eqs = Vec::with_capacity(d + 1);
            for c in 0..d {
                let row: QVec = pts.iter().map(|p| p[c].clone()).collect();
                let total: Rational = pts.iter().fold(Rational::zero(), |acc, p| acc + &p[c]);
                eqs.push(Halfspace::new(row, -(total * &inv_k)));
            }
            eqs.push(Halfspace::new(
                vec![Rational::one(); n],
                Rational::one() - Rational::from_integer((n as i64).into()) * &inv_k,
            ));
            if let Some(sol) = Polyhedron::from_constraints(n, &ineqs, &eqs) {
                let mu = &sol.vertices()[0];
                let mut v = vec![vec![Rational::zero(); d]; self.r()];
                for a in 0..n {
                    let lam = &inv_k + &mu[a];
                    for c in 0..d {
                        v[owner[a]][c] += &lam * &pts[a][c];
                    }
                }
                return Ok(v);
            }
            k *= 2;
        }
        Err(Error::OriginNotInterior)
    }

    /// The vectors `vᵢ ∈ relint Δ⁽ⁱ⁾` and `wᵢ ∈ relint ∇⁽ⁱ⁾` with zero sums.
    pub fn interior_vectors(&self, dual: &NefPartition) -> Result<InteriorVectors> {
        Ok(InteriorVectors { v: self.positive_split()?, w: dual.positive_split()? })
    }

    /// Checks the invariants of [`InteriorVectors`].
    pub fn check_interior_vectors(&self, dual: &NefPartition, iv: &InteriorVectors) -> Vec<Check> {
        let r = self.r();
        let zero = vec![Rational::zero(); self.dim];
        let sum = |vs: &[QVec]| vs.iter().fold(zero.clone(), |a, b| crate::geometry::add(&a, b));
        let mut out = vec![
            Check::new("v_sum_zero", sum(&iv.v) == zero, ""),
            Check::new("w_sum_zero", sum(&iv.w) == zero, ""),
            Check::new(
                "v_relative_interior",
                (0..r).all(|i| self.parts[i].contains_in_relative_interior(&iv.v[i])),
                "",
            ),
            Check::new(
                "w_relative_interior",
                (0..r).all(|i| dual.parts[i].contains_in_relative_interior(&iv.w[i])),
                "",
            ),
        ];
        if r >= 2 {
            let mut ok = true;
            for i in 0..r {
                for j in 0..r {
                    let p = dot(&iv.v[i], &iv.w[j]);
                    let signed = if i == j { -p } else { p };
                    ok &= signed.is_negative();
                }
            }
            out.push(Check::new("sign_pattern", ok, "(−1)^δᵢⱼ ⟨vᵢ,wⱼ⟩ < 0"));
        }
        out
    }

    /// Integer vertex lists of the parts, for output.
    pub fn part_vertices(&self) -> Vec<Vec<Vec<i64>>> {
        self.parts
            .iter()
            .map(|p| p.integer_vertices().expect("lattice polytope"))
            .collect()
    }
}

pub fn origin(d: usize) -> QVec {
    qvec(&vec![0; d])
}

