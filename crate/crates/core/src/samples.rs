//! Built-in nef-partitions used by the demo, the tests and the CLI examples.

/// A named input: dimension and the vertex lists of the parts.
#[derive(Debug, Clone)]
pub struct Sample {
    pub name: &'static str,
    pub dim: usize,
    pub parts: Vec<Vec<Vec<i64>>>,
}

/// Complete intersection of tridegrees (1,3,0) and (1,0,3) in P¹×P²×P².
pub fn schoen() -> Sample {
    Sample {
        name: "schoen",
        dim: 5,
        parts: vec![
            vec![
                vec![0, -1, -1, 0, 0],
                vec![0, 2, -1, 0, 0],
                vec![0, -1, 2, 0, 0],
                vec![1, -1, -1, 0, 0],
                vec![1, 2, -1, 0, 0],
                vec![1, -1, 2, 0, 0],
            ],
            vec![
                vec![0, 0, 0, -1, -1],
                vec![0, 0, 0, 2, -1],
                vec![0, 0, 0, -1, 2],
                vec![-1, 0, 0, -1, -1],
                vec![-1, 0, 0, 2, -1],
                vec![-1, 0, 0, -1, 2],
            ],
        ],
    }
}

/// The dual parts listed alongside [`schoen`].
pub fn schoen_dual_parts() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![1, 0, 0, 0, 0], vec![0, -1, 0, 0, 0], vec![0, 0, -1, 0, 0], vec![0, 1, 1, 0, 0]],
        vec![vec![-1, 0, 0, 0, 0], vec![0, 0, 0, -1, 0], vec![0, 0, 0, 0, -1], vec![0, 0, 0, 1, 1]],
    ]
}

/// Reflexive triangle, a single part.
pub fn triangle() -> Sample {
    Sample { name: "triangle", dim: 2, parts: vec![vec![vec![1, 0], vec![0, 1], vec![-1, -1]]] }
}

/// Two parts in the plane: a segment and a triangle.
pub fn plane_pair() -> Sample {
    Sample {
        name: "plane_pair",
        dim: 2,
        parts: vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 1], vec![0, 0], vec![-1, -1]]],
    }
}

/// Direct sum of two symmetric segments; reducible.
pub fn square() -> Sample {
    Sample {
        name: "square",
        dim: 2,
        parts: vec![vec![vec![-1, 0], vec![1, 0]], vec![vec![0, -1], vec![0, 1]]],
    }
}

/// Quadric and cubic in P⁴ (K3 surfaces), as a split of the fan simplex.
pub fn quadric_cubic() -> Sample {
    Sample {
        name: "quadric_cubic",
        dim: 4,
        parts: vec![
            vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![-1, -1, -1, -1]],
            vec![vec![0, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
        ],
    }
}

/// The reflexive 3-simplex, a single part (quartic surfaces).
pub fn simplex3() -> Sample {
    Sample {
        name: "simplex3",
        dim: 3,
        parts: vec![vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]]],
    }
}

pub fn all() -> Vec<Sample> {
    vec![triangle(), plane_pair(), square(), simplex3(), quadric_cubic(), schoen()]
}
