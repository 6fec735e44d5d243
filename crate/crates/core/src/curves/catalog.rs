//! The tuples settled by a single curve family, with the published data for each.

use num_rational::BigRational;

use super::delta::delta_candidates;
use serde::Serialize;

use super::family::CurveFamily;
use super::quartic::WeierstrassModel;
use super::CurveError;
use crate::arith::{is_square_in_field, squarefree_class, QuadElem, QuadField};
use crate::oracle::{Answer, OracleRecord, Question};
use crate::tuples::ATuple;

/// Gaussian integer a + bi as a pair.
pub type GaussPair = (i64, i64);

/// One twist with its tabulated Weierstrass model and point data.
#[derive(Debug, Clone)]
pub struct TabulatedCase {
    pub delta: GaussPair,
    /// (a2, a4, a6) of y^2 = x^3 + a2 x^2 + a4 x + a6
    pub model: [GaussPair; 3],
    /// rank of the Jacobian when stated
    pub rank: Option<u32>,
    /// question answered and the X-coordinates found
    pub points: (Question, Vec<(i64, i64)>),
}

/// A tuple with the family that settles it.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub name: &'static str,
    pub tuple: Vec<i64>,
    pub pivots: (usize, usize),
    pub scale: i64,
    pub field_d: i64,
    pub linear: [usize; 2],
    pub quad: usize,
    /// twists as printed, before reduction to classes
    pub printed_deltas: Vec<GaussPair>,
    /// per-twist data when tabulated
    pub cases: Vec<TabulatedCase>,
    /// otherwise one list of primes and one X-set for every twist
    pub shared_points: Option<(Vec<Question>, Vec<(i64, i64)>)>,
    /// (n, d) stated as the outcome, if any
    pub stated: Option<(i64, i64)>,
}

impl FamilySpec {
    pub fn tuple(&self) -> ATuple {
        ATuple::new(self.tuple.clone()).expect("catalog tuples are valid")
    }

    pub fn field(&self) -> QuadField {
        QuadField::new(self.field_d).expect("supported field")
    }

    pub fn family(&self) -> Result<CurveFamily, CurveError> {
        CurveFamily::derive(&self.tuple(), self.pivots, self.scale, self.field(), self.linear, self.quad)
    }

    pub fn printed(&self) -> Vec<QuadElem> {
        let f = self.field();
        self.printed_deltas.iter().map(|&(a, b)| QuadElem::from_ints(f, a, b)).collect()
    }

    /// Point records for every twist: tabulated data where given, else the shared set.
    /// X-sets keep only the values that really lie on the curve.
    pub fn fixture_records(&self) -> Result<Vec<OracleRecord>, CurveError> {
        let fam = self.family()?;
        let f = self.field();
        let mut out = Vec::new();
        let mut push = |key: &str, q: Question, answer: Answer, provenance: String| {
            out.push(OracleRecord { key: key.to_string(), q, answer, provenance });
        };
        let on = |delta: &QuadElem, xs: &[(i64, i64)]| -> Vec<BigRational> {
            let mut v: Vec<BigRational> = rat_pairs(xs).into_iter().filter(|x| on_curve(&fam, delta, x)).collect();
            v.sort();
            v.dedup();
            v
        };
        for c in &self.cases {
            let delta = QuadElem::from_ints(f, c.delta.0, c.delta.1);
            let key = fam.curve(&delta)?.canonical_key();
            let tag = format!("{} delta={delta}", self.name);
            if let Some(r) = c.rank {
                push(&key, Question::Rank, Answer::Rank(r), format!("{tag}: tabulated rank"));
            }
            let (q, xs) = &c.points;
            let what = match q {
                Question::Points => "rank 0, no point with rational X".to_string(),
                _ => format!("elliptic Chabauty at p={}", q_prime(q)),
            };
            push(&key, *q, Answer::XSet(on(&delta, xs)), format!("{tag}: {what}"));
        }
        if let Some((qs, xs)) = &self.shared_points {
            for delta in delta_candidates(&fam)? {
                let key = fam.curve(&delta)?.canonical_key();
                for q in qs {
                    let what = match q {
                        Question::Chabauty(0) => "elliptic Chabauty, prime not stated".to_string(),
                        _ => format!("elliptic Chabauty at p={}", q_prime(q)),
                    };
                    let tag = format!("{} delta={delta}", self.name);
                    push(&key, *q, Answer::XSet(on(&delta, xs)), format!("{tag}: {what}; shared X-set"));
                }
            }
        }
        Ok(out)
    }
}

fn q_prime(q: &Question) -> u64 {
    match q {
        Question::Chabauty(p) => *p,
        _ => 0,
    }
}

/// Whether some Y in K gives a point (X, Y) on the delta-twist.
pub fn on_curve(fam: &CurveFamily, delta: &QuadElem, x: &BigRational) -> bool {
    is_square_in_field(&fam.curve_poly(delta).eval_rat(x)).is_some()
}

/// Classes of the printed twists.
pub fn printed_classes(spec: &FamilySpec) -> Result<Vec<String>, CurveError> {
    let mut v: Vec<String> = spec.printed().iter().map(|d| Ok(squarefree_class(d)?.to_string())).collect::<Result<_, CurveError>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// A tabulated model compared with the Jacobian of the derived twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JCheck {
    pub family: &'static str,
    pub delta: String,
    pub curve_j: String,
    pub model_j: String,
    pub equal: bool,
}

/// j-invariant comparison for every tabulated model.
pub fn jinv_check() -> Result<Vec<JCheck>, CurveError> {
    let mut out = Vec::new();
    for spec in catalog() {
        let fam = spec.family()?;
        let f = spec.field();
        for c in &spec.cases {
            let delta = QuadElem::from_ints(f, c.delta.0, c.delta.1);
            let curve_j = fam.curve(&delta)?.j_invariant();
            let [a2, a4, a6] = c.model.map(|(a, b)| QuadElem::from_ints(f, a, b));
            let model_j = WeierstrassModel::new(a2, a4, a6)?.j_invariant();
            out.push(JCheck {
                family: spec.name,
                delta: delta.to_string(),
                equal: curve_j == model_j,
                curve_j: curve_j.to_string(),
                model_j: model_j.to_string(),
            });
        }
    }
    Ok(out)
}

/// Point records for all entries.
pub fn catalog_fixture_records() -> Result<Vec<OracleRecord>, CurveError> {
    let mut out = Vec::new();
    for s in catalog() {
        out.extend(s.fixture_records()?);
    }
    Ok(out)
}

pub fn rat_pairs(v: &[(i64, i64)]) -> Vec<BigRational> {
    v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()
}

fn pm(a: i64, b: i64) -> [GaussPair; 2] {
    [(a, b), (a, -b)]
}

fn printed(groups: &[(i64, i64)]) -> Vec<GaussPair> {
    groups.iter().flat_map(|&(a, b)| pm(a, b)).collect()
}

fn gauss_eight() -> Vec<GaussPair> {
    printed(&[(-3, 1), (-1, 3), (1, 3), (3, 1)])
}

fn case(delta: GaussPair, model: [GaussPair; 3], rank: Option<u32>, q: Question, xs: &[(i64, i64)]) -> TabulatedCase {
    TabulatedCase { delta, model, rank, points: (q, xs.to_vec()) }
}

/// All six entries, in a fixed order.
pub fn catalog() -> Vec<FamilySpec> {
    let c13 = Question::Chabauty(13);
    let c29 = Question::Chabauty(29);
    let third = [(1, 3), (-1, 3)];
    let half = [(1, 2), (-1, 2)];
    vec![
        FamilySpec {
            name: "k7-a",
            tuple: vec![1, 5, 6, 7, 2, 1, 10],
            pivots: (0, 5),
            scale: 2,
            field_d: -1,
            linear: [4, 1],
            quad: 6,
            printed_deltas: gauss_eight(),
            cases: vec![
                case((1, -3), [(0, 1), (-23, -17), (1597, 2291)], Some(0), Question::Points, &[]),
                case((1, 3), [(0, -1), (-23, 17), (1597, -2291)], Some(0), Question::Points, &[]),
                case((3, -1), [(1, 0), (23, -17), (-2291, -1597)], Some(1), c13, &[(-3, 1)]),
                case((3, 1), [(1, 0), (23, 17), (-2291, 1597)], Some(1), c13, &[(3, 1)]),
            ],
            shared_points: None,
            stated: Some((2, 1)),
        },
        FamilySpec {
            name: "k7-b",
            tuple: vec![2, 3, 1, 5, 6, 7, 2],
            pivots: (0, 4),
            scale: 1,
            field_d: -1,
            linear: [1, 3],
            quad: 6,
            printed_deltas: printed(&[(-4, 2), (-2, 4), (2, 4), (4, 2)]),
            cases: vec![
                case((2, -4), [(0, 0), (-9, -12), (-104, -572)], None, c29, &[(-1, 1), third[0], third[1]]),
                case((2, 4), [(0, 0), (-9, 12), (104, -572)], None, c29, &[(1, 1), third[0], third[1]]),
                case((4, -2), [(0, 0), (9, -12), (-572, -104)], None, c29, &third),
                case((4, 2), [(0, 0), (9, 12), (572, -104)], None, c29, &third),
            ],
            shared_points: None,
            stated: Some((2, 1)),
        },
        FamilySpec {
            name: "k7-c",
            tuple: vec![3, 1, 5, 6, 7, 2, 1],
            pivots: (0, 3),
            scale: 1,
            field_d: -1,
            linear: [1, 2],
            quad: 6,
            printed_deltas: gauss_eight(),
            cases: vec![
                case((1, -3), [(0, 0), (36, 27), (-351, 243)], None, c13, &[(-1, 1), half[0], half[1]]),
                case((1, 3), [(0, 0), (36, -27), (351, 243)], None, c13, &[(1, 1), half[0], half[1]]),
                case((3, -1), [(0, 0), (-36, 27), (243, -351)], None, c13, &half),
                case((3, 1), [(0, 0), (-36, -27), (-243, -351)], None, c13, &half),
            ],
            shared_points: None,
            stated: Some((3, 1)),
        },
        FamilySpec {
            name: "k5-a",
            tuple: vec![-3, -5, 2, 1, 1],
            pivots: (0, 4),
            scale: 1,
            field_d: 3,
            linear: [2, 1],
            quad: 3,
            printed_deltas: vec![],
            cases: vec![],
            shared_points: Some((
                vec![Question::Chabauty(11), Question::Chabauty(37), Question::Chabauty(59)],
                vec![(-3, 1), (-2, 1), (-1, 1), (1, 1), (2, 1)],
            )),
            stated: Some((-12, 7)),
        },
        FamilySpec {
            name: "k5-b",
            tuple: vec![2, 5, 2, -1, -1],
            pivots: (2, 3),
            scale: 1,
            field_d: -1,
            linear: [1, 4],
            quad: 0,
            printed_deltas: vec![],
            cases: vec![],
            shared_points: Some((vec![c13], vec![(-1, 1), (1, 1)])),
            stated: Some((-4, 3)),
        },
        FamilySpec {
            name: "k5-c",
            tuple: vec![6, 5, 1, 3, 2],
            pivots: (0, 3),
            scale: 1,
            field_d: -1,
            linear: [2, 1],
            quad: 4,
            printed_deltas: printed(&[(1, 3), (3, 1)]),
            cases: vec![],
            shared_points: Some((vec![Question::Chabauty(0)], vec![(-1, 1), (1, 1)])),
            stated: None,
        },
    ]
}

/// The entry for a tuple or its mirror image.
pub fn spec_for(t: &ATuple) -> Option<(FamilySpec, bool)> {
    catalog().into_iter().find_map(|s| {
        let st = s.tuple();
        if &st == t {
            Some((s, false))
        } else if st == t.mirror() {
            Some((s, true))
        } else {
            None
        }
    })
}

pub fn by_name(name: &str) -> Option<FamilySpec> {
    catalog().into_iter().find(|s| s.name == name)
}
