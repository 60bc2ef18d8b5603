//! Newton polyhedron and Newton diagram of a Puiseux polynomial at the origin.
//!
//! The polyhedron is the convex hull of the quadrants `s + R²₊` over the support.
//! Its boundary is a monotone staircase. Vertices are listed with increasing
//! `t1` (decreasing `t2`) and compact edges join consecutive vertices. A
//! vertical half-line above the first vertex and a horizontal one to the right
//! of the last close it off.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{int, ExponentPair, PuiseuxPoly, Rational, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    Vertex,
    CompactEdge,
    HalflineHorizontal,
    HalflineVertical,
}

impl FaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            FaceKind::Vertex => "vertex",
            FaceKind::CompactEdge => "compact_edge",
            FaceKind::HalflineHorizontal => "halfline_horizontal",
            FaceKind::HalflineVertical => "halfline_vertical",
        }
    }
}

/// A face of the Newton polyhedron. Compact edges carry their supporting
/// weight, normalized so that `κ·t = 1` on the edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub kind: FaceKind,
    pub endpoints: Vec<ExponentPair>,
    pub weight: Option<Weight>,
}

impl Face {
    fn vertex(p: ExponentPair) -> Self {
        Face { kind: FaceKind::Vertex, endpoints: vec![p], weight: None }
    }

    fn edge(left: ExponentPair, right: ExponentPair) -> Self {
        let weight = edge_weight(&left, &right);
        Face { kind: FaceKind::CompactEdge, endpoints: vec![left, right], weight: Some(weight) }
    }

    fn halfline(kind: FaceKind, p: ExponentPair) -> Self {
        Face { kind, endpoints: vec![p], weight: None }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.kind, FaceKind::Vertex | FaceKind::CompactEdge)
    }
}

/// Per-edge data of the Newton diagram for the edge `[(A_{l-1}, B_{l-1}), (A_l, B_l)]`.
/// `a_l = κ^l_2 / κ^l_1`; `d_l` is where the edge's line crosses the bisectrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub index: usize,
    pub left: (Rational, Rational),
    pub right: (Rational, Rational),
    pub weight: Weight,
    pub a: Rational,
    pub d: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    /// Vertices in order of decreasing `t2`.
    pub vertices: Vec<ExponentPair>,
    /// Compact edges, left to right (increasing `a_l`).
    pub edges: Vec<Face>,
    pub principal: Face,
    pub distance: Rational,
    pub edge_data: Vec<EdgeData>,
}

impl NewtonData {
    /// Weight of the principal face when it is a compact edge.
    pub fn principal_weight(&self) -> Option<&Weight> {
        self.principal.weight.as_ref()
    }

    /// All faces in boundary order, from the vertical half-line to the horizontal one.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::with_capacity(2 * self.vertices.len() + 1);
        out.push(Face::halfline(FaceKind::HalflineVertical, self.vertices[0].clone()));
        for (i, v) in self.vertices.iter().enumerate() {
            out.push(Face::vertex(v.clone()));
            if let Some(e) = self.edges.get(i) {
                out.push(e.clone());
            }
        }
        out.push(Face::halfline(
            FaceKind::HalflineHorizontal,
            self.vertices.last().expect("non-empty").clone(),
        ));
        out
    }

    /// Whether `(t1, t2)` lies in the polyhedron.
    pub fn contains(&self, t1: &Rational, t2: &Rational) -> bool {
        let first = &self.vertices[0];
        let last = self.vertices.last().expect("non-empty");
        if t1 < &first.e1 || t2 < &last.t2() {
            return false;
        }
        self.edges.iter().all(|e| {
            let w = e.weight.as_ref().expect("compact edge has a weight");
            &w.k1 * t1 + &w.k2 * t2 >= int(1)
        })
    }
}

/// Weight of the line through two staircase points with `left.e1 < right.e1`
/// and `left.e2 > right.e2`.
fn edge_weight(left: &ExponentPair, right: &ExponentPair) -> Weight {
    let (a0, b0) = (&left.e1, left.t2());
    let (a1, b1) = (&right.e1, right.t2());
    let det = a1 * &b0 - a0 * &b1;
    let k1 = (&b0 - &b1) / &det;
    let k2 = (a1 - a0) / &det;
    Weight::new(k1, k2).expect("edge weight is positive")
}

/// Cross product of `(a - o)` and `(b - o)`.
fn cross(o: &ExponentPair, a: &ExponentPair, b: &ExponentPair) -> Rational {
    let (ox, oy) = (&o.e1, o.t2());
    (&a.e1 - ox) * (b.t2() - &oy) - (a.t2() - &oy) * (&b.e1 - ox)
}

pub fn build_polyhedron(phi: &PuiseuxPoly) -> Result<NewtonData> {
    if phi.is_zero() {
        return Err(Error::NotFiniteType);
    }
    // Support is already sorted by (t1, t2); keep the lower-left staircase.
    let mut stair: Vec<ExponentPair> = Vec::new();
    for p in phi.support() {
        if stair.last().is_none_or(|s| p.e2 < s.e2) {
            stair.push(p.clone());
        }
    }
    let mut hull: Vec<ExponentPair> = Vec::with_capacity(stair.len());
    for p in stair {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p).is_positive() {
            hull.pop();
        }
        hull.push(p);
    }
    let edges: Vec<Face> = hull.windows(2).map(|w| Face::edge(w[0].clone(), w[1].clone())).collect();
    let (principal, distance) = locate_principal(&hull, &edges);
    let edge_data = cluster_data(&edges);
    Ok(NewtonData { vertices: hull, edges, principal, distance, edge_data })
}

fn locate_principal(vertices: &[ExponentPair], edges: &[Face]) -> (Face, Rational) {
    let first = &vertices[0];
    if first.e1 >= first.t2() {
        let d = first.e1.clone();
        let kind = if first.e1 == first.t2() { FaceKind::Vertex } else { FaceKind::HalflineVertical };
        return (Face::halfline(kind, first.clone()), d);
    }
    let last = vertices.last().expect("non-empty");
    if last.t2() >= last.e1 {
        let d = last.t2();
        let kind = if last.e1 == last.t2() { FaceKind::Vertex } else { FaceKind::HalflineHorizontal };
        return (Face::halfline(kind, last.clone()), d);
    }
    // Here the first vertex is above the bisectrix and the last one below it.
    for (i, v) in vertices.iter().enumerate() {
        if v.e1 == v.t2() {
            return (Face::vertex(v.clone()), v.e1.clone());
        }
        if v.e1 > v.t2() {
            let edge = edges[i - 1].clone();
            let d = edge.weight.as_ref().expect("compact edge").norm().recip();
            return (edge, d);
        }
    }
    unreachable!("bisectrix must cross the staircase")
}

fn cluster_data(edges: &[Face]) -> Vec<EdgeData> {
    edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let w = e.weight.clone().expect("compact edge");
            let a = w.ratio();
            let (l, r) = (&e.endpoints[0], &e.endpoints[1]);
            let d = (&r.e1 + &a * r.t2()) / (int(1) + &a);
            EdgeData {
                index: i + 1,
                left: (l.e1.clone(), l.t2()),
                right: (r.e1.clone(), r.t2()),
                weight: w,
                a,
                d,
            }
        })
        .collect()
}

pub fn distance(n: &NewtonData) -> Rational {
    n.distance.clone()
}

pub fn principal_face(n: &NewtonData) -> Face {
    n.principal.clone()
}

pub fn edge_cluster_data(n: &NewtonData) -> Vec<EdgeData> {
    n.edge_data.clone()
}

/// Minimal `κ`-degree over the support.
pub fn kappa_order(phi: &PuiseuxPoly, kappa: &Weight) -> Option<Rational> {
    phi.support().map(|e| e.weighted_degree(kappa)).min()
}

/// The `κ`-principal part: all terms of minimal `κ`-degree.
pub fn kappa_principal_part(phi: &PuiseuxPoly, kappa: &Weight) -> PuiseuxPoly {
    match kappa_order(phi, kappa) {
        None => PuiseuxPoly::zero(),
        Some(min) => phi.filter_terms(|e| e.weighted_degree(kappa) == min),
    }
}

/// Principal part `φ_p`: the terms lying on the principal face. For unbounded
/// principal faces this is the (finite) set of support points on the half-line.
pub fn principal_part(phi: &PuiseuxPoly, n: &NewtonData) -> PuiseuxPoly {
    let p = &n.principal;
    match p.kind {
        FaceKind::CompactEdge => kappa_principal_part(phi, p.weight.as_ref().expect("edge weight")),
        FaceKind::Vertex => phi.filter_terms(|e| e == &p.endpoints[0]),
        FaceKind::HalflineHorizontal => {
            let v = &p.endpoints[0];
            phi.filter_terms(|e| e.e2 == v.e2 && e.e1 >= v.e1)
        }
        FaceKind::HalflineVertical => {
            let v = &p.endpoints[0];
            phi.filter_terms(|e| e.e1 == v.e1 && e.e2 >= v.e2)
        }
    }
}

/// True when the whole support lies on one compact edge (or is a single monomial).
pub fn is_mixed_homogeneous(phi: &PuiseuxPoly) -> bool {
    match build_polyhedron(phi) {
        Err(_) => false,
        Ok(n) => match n.edges.len() {
            0 => phi.len() == 1,
            1 => {
                let w = n.edges[0].weight.as_ref().expect("edge weight");
                phi.support().all(|e| e.weighted_degree(w) == int(1))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn main_example() -> PuiseuxPoly {
        PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)])
    }

    #[test]
    fn main_example_hull() {
        let n = build_polyhedron(&main_example()).unwrap();
        assert_eq!(n.vertices, vec![ExponentPair::int(0, 2), ExponentPair::int(4, 0)]);
        assert_eq!(n.edges.len(), 1);
        assert_eq!(n.edges[0].weight, Some(Weight::new(rat(1, 4), rat(1, 2)).unwrap()));
        assert_eq!(distance(&n), rat(4, 3));
        let p = principal_face(&n);
        assert_eq!(p.kind, FaceKind::CompactEdge);
        assert_eq!(p.endpoints, vec![ExponentPair::int(0, 2), ExponentPair::int(4, 0)]);
        // (2,1) sits on the edge but is not a vertex.
        assert_eq!(ExponentPair::int(2, 1).weighted_degree(p.weight.as_ref().unwrap()), int(1));
    }

    #[test]
    fn single_monomial() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(2, 2, 1)])).unwrap();
        assert_eq!(n.vertices, vec![ExponentPair::int(2, 2)]);
        assert!(n.edges.is_empty());
        assert_eq!(n.distance, int(2));
        assert_eq!(n.principal.kind, FaceKind::Vertex);
        let kinds: Vec<_> = n.faces().iter().map(|f| f.kind).collect();
        assert_eq!(
            kinds,
            vec![FaceKind::HalflineVertical, FaceKind::Vertex, FaceKind::HalflineHorizontal]
        );
    }

    #[test]
    fn cusp_edge() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)])).unwrap();
        assert_eq!(n.vertices, vec![ExponentPair::int(0, 2), ExponentPair::int(3, 0)]);
        assert_eq!(n.edges[0].weight, Some(Weight::new(rat(1, 3), rat(1, 2)).unwrap()));
        assert_eq!(n.distance, rat(6, 5));
    }

    #[test]
    fn circle_distance_is_one() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(2, 0, 1), (0, 2, 1)])).unwrap();
        assert_eq!(n.distance, int(1));
    }

    #[test]
    fn pure_x2_power_has_horizontal_principal_face() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(0, 2, 1)])).unwrap();
        assert_eq!(n.distance, int(2));
        assert_eq!(n.principal.kind, FaceKind::HalflineHorizontal);
        assert_eq!(n.principal.endpoints, vec![ExponentPair::int(0, 2)]);
        assert!(n.principal.weight.is_none());
    }

    #[test]
    fn pure_x1_power_has_vertical_principal_face() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(3, 0, 1), (3, 4, 1)])).unwrap();
        assert_eq!(n.distance, int(3));
        assert_eq!(n.principal.kind, FaceKind::HalflineVertical);
    }

    #[test]
    fn vertex_on_bisectrix_wins_over_edges() {
        // (2,2) lies on the edge (0,4)-(4,0) without being a vertex.
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(0, 4, 1), (2, 2, 1), (4, 0, 1)])).unwrap();
        assert_eq!(n.principal.kind, FaceKind::CompactEdge);
        // Here (2,2) is a vertex between two edges.
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(0, 5, 1), (2, 2, 1), (5, 0, 1)])).unwrap();
        assert_eq!(n.vertices.len(), 3);
        assert_eq!(n.principal.kind, FaceKind::Vertex);
        assert_eq!(n.principal.endpoints, vec![ExponentPair::int(2, 2)]);
        assert_eq!(n.distance, int(2));
    }

    #[test]
    fn kappa_principal_parts() {
        let k = Weight::new(rat(1, 4), rat(1, 2)).unwrap();
        assert_eq!(
            kappa_principal_part(&main_example(), &k),
            PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1)])
        );
        let k = Weight::new(rat(1, 3), rat(1, 2)).unwrap();
        let cusp = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        assert_eq!(kappa_principal_part(&cusp, &k), cusp);
        let extra = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1), (1, 2, 1)]);
        assert_eq!(kappa_principal_part(&extra, &k), cusp);
    }

    #[test]
    fn adapted_main_example_edge_data() {
        let n = build_polyhedron(&PuiseuxPoly::from_int_terms(&[(0, 2, 1), (5, 0, 1)])).unwrap();
        let e = edge_cluster_data(&n);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].weight, Weight::new(rat(1, 5), rat(1, 2)).unwrap());
        assert_eq!(e[0].a, rat(5, 2));
        assert_eq!(e[0].d, rat(10, 7));
    }

    #[test]
    fn principal_square_edge_data() {
        let sq = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1)]);
        let e = edge_cluster_data(&build_polyhedron(&sq).unwrap());
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].left.clone(), e[0].right.clone()), ((int(0), int(2)), (int(4), int(0))));
        assert_eq!(e[0].a, int(2));
        assert_eq!(e[0].d, rat(4, 3));
    }

    #[test]
    fn dominated_middle_point_is_dropped() {
        // (2,2) lies above the segment (0,4)-(3,0), so the diagram is a single edge.
        let p = PuiseuxPoly::from_int_terms(&[(0, 4, 1), (2, 2, 1), (3, 0, 1)]);
        let n = build_polyhedron(&p).unwrap();
        assert_eq!(n.vertices, vec![ExponentPair::int(0, 4), ExponentPair::int(3, 0)]);
        let e = edge_cluster_data(&n);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].a, rat(3, 4));
    }

    #[test]
    fn two_edges_sorted_by_increasing_a() {
        // x2^4 + x1 x2 + x1^3: vertices (0,4), (1,1), (3,0).
        let p = PuiseuxPoly::from_int_terms(&[(0, 4, 1), (1, 1, 1), (3, 0, 1)]);
        let e = edge_cluster_data(&build_polyhedron(&p).unwrap());
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].a, rat(1, 3));
        assert_eq!(e[1].a, int(2));
        assert!(e[0].left.1 > e[0].right.1 && e[0].right.1 > e[1].right.1);
    }

    #[test]
    fn zero_is_not_finite_type() {
        assert_eq!(build_polyhedron(&PuiseuxPoly::zero()), Err(Error::NotFiniteType));
    }

    #[test]
    fn fractional_support() {
        let p = PuiseuxPoly::from_terms([
            (ExponentPair::int(0, 2), int(1)),
            (ExponentPair::new(rat(5, 2), 0), int(1)),
        ]);
        let n = build_polyhedron(&p).unwrap();
        assert_eq!(n.distance, rat(10, 9));
    }
}
