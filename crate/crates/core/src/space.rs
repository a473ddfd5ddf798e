//! Finite ordered simplicial complexes: the input format and the built-in
//! catalog of spaces.
//!
//! Vertices are `0..vertex_count` and are totally ordered by index, so every
//! simplex is written as a strictly increasing vertex list.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sset::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedComplexSpec {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(rename = "vertices")]
    pub vertex_count: u32,
    #[serde(rename = "simplices")]
    pub maximal_simplices: Vec<Vec<u32>>,
    #[serde(default)]
    pub basepoint: u32,
}

fn default_name() -> String {
    "unnamed".to_string()
}

impl OrderedComplexSpec {
    pub fn new(name: &str, vertex_count: u32, simplices: Vec<Vec<u32>>) -> Result<Self> {
        let spec = OrderedComplexSpec {
            name: name.to_string(),
            vertex_count,
            maximal_simplices: simplices,
            basepoint: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertex_count == 0 {
            return Err(Error::InvalidComplex("no vertices".into()));
        }
        if self.maximal_simplices.is_empty() {
            return Err(Error::InvalidComplex("no simplices".into()));
        }
        for s in &self.maximal_simplices {
            if s.is_empty() {
                return Err(Error::InvalidComplex("empty simplex".into()));
            }
            for w in s.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateVertex {
                        simplex: s.clone(),
                        vertex: w[0],
                    });
                }
            }
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() {
                let v = s.iter().find(|v| s.iter().filter(|w| w == v).count() > 1).unwrap();
                return Err(Error::DuplicateVertex {
                    simplex: s.clone(),
                    vertex: *v,
                });
            }
            if sorted != *s {
                return Err(Error::Unordered { simplex: s.clone() });
            }
            if let Some(&v) = s.iter().find(|&&v| v >= self.vertex_count) {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: self.vertex_count,
                });
            }
        }
        if self.basepoint >= self.vertex_count {
            return Err(Error::VertexOutOfRange {
                vertex: self.basepoint,
                count: self.vertex_count,
            });
        }
        let mut uf = UnionFind::new(self.vertex_count as usize);
        let mut seen = vec![false; self.vertex_count as usize];
        for s in &self.maximal_simplices {
            for &v in s {
                seen[v as usize] = true;
                uf.union(s[0] as usize, v as usize);
            }
        }
        if seen.iter().any(|s| !s) || uf.components() != 1 {
            return Err(Error::Disconnected(self.name.clone()));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.maximal_simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    /// Every simplex of the complex (the face closure of the given list).
    pub fn all_simplices(&self) -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        for s in &self.maximal_simplices {
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                out.insert(
                    (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| s[i])
                        .collect::<Vec<u32>>(),
                );
            }
        }
        out
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension() + 1];
        for s in self.all_simplices() {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

/// Parses and validates the JSON complex format.
pub fn load_complex(text: &str) -> Result<OrderedComplexSpec> {
    let spec: OrderedComplexSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

pub fn point() -> OrderedComplexSpec {
    OrderedComplexSpec::new("point", 1, vec![vec![0]]).unwrap()
}

pub fn interval() -> OrderedComplexSpec {
    OrderedComplexSpec::new("interval", 2, vec![vec![0, 1]]).unwrap()
}

/// The `m`-gon.
pub fn circle(m: u32) -> Result<OrderedComplexSpec> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("circle needs m >= 3, got {m}")));
    }
    let mut s: Vec<Vec<u32>> = (0..m - 1).map(|i| vec![i, i + 1]).collect();
    s.push(vec![0, m - 1]);
    OrderedComplexSpec::new(&format!("circle{m}"), m, s)
}

/// The boundary of the `(d+1)`-simplex.
pub fn sphere(d: u32) -> Result<OrderedComplexSpec> {
    if d < 1 {
        return Err(Error::InvalidParameter(format!("sphere needs d >= 1, got {d}")));
    }
    let n = d + 2;
    let s = (0..n)
        .rev()
        .map(|skip| (0..n).filter(|&v| v != skip).collect())
        .collect();
    OrderedComplexSpec::new(&format!("sphere{d}"), n, s)
}

/// The minimal 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus() -> OrderedComplexSpec {
    let mut s = Vec::new();
    for i in 0..7u32 {
        for t in [[i, i + 1, i + 3], [i, i + 2, i + 3]] {
            let mut t: Vec<u32> = t.iter().map(|v| v % 7).collect();
            t.sort_unstable();
            s.push(t);
        }
    }
    s.sort();
    OrderedComplexSpec::new("torus", 7, s).unwrap()
}

/// The minimal 6-vertex projective plane (hemi-icosahedron).
pub fn rp2() -> OrderedComplexSpec {
    let s = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    OrderedComplexSpec::new("rp2", 6, s.iter().map(|t| t.to_vec()).collect()).unwrap()
}

/// `r` triangles sharing vertex 0.
pub fn wedge_circles(r: u32) -> Result<OrderedComplexSpec> {
    if r < 1 {
        return Err(Error::InvalidParameter("wedge needs r >= 1".into()));
    }
    let mut s = Vec::new();
    for i in 0..r {
        let (a, b) = (2 * i + 1, 2 * i + 2);
        s.extend([vec![0, a], vec![0, b], vec![a, b]]);
    }
    OrderedComplexSpec::new(&format!("wedge_circles{r}"), 2 * r + 1, s)
}

/// Names accepted by [`builtin_space`], for listings.
pub const BUILTIN_NAMES: &[&str] = &[
    "point",
    "interval",
    "circle<m>  (m >= 3, e.g. circle3)",
    "sphere<d>  (d >= 1, e.g. sphere2)",
    "torus",
    "rp2",
    "wedge_circles<r>  (r >= 1, e.g. wedge_circles2)",
];

fn parse_param(name: &str, prefix: &str) -> Option<Result<u32>> {
    let rest = name.strip_prefix(prefix)?;
    let rest = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix(':'))
        .unwrap_or(rest);
    Some(
        rest.parse::<u32>()
            .map_err(|_| Error::InvalidParameter(format!("bad parameter in `{name}`"))),
    )
}

/// Looks up a built-in space by name, e.g. `circle3`, `circle(4)`, `sphere2`,
/// `torus`, `rp2`, `wedge_circles2`.
pub fn builtin_space(name: &str) -> Result<OrderedComplexSpec> {
    let name = name.trim();
    match name {
        "point" => return Ok(point()),
        "interval" => return Ok(interval()),
        "torus" => return Ok(torus()),
        "rp2" => return Ok(rp2()),
        _ => {}
    }
    if let Some(r) = parse_param(name, "wedge_circles") {
        return wedge_circles(r?);
    }
    if let Some(m) = parse_param(name, "circle") {
        return circle(m?);
    }
    if let Some(d) = parse_param(name, "sphere") {
        return sphere(d?);
    }
    Err(Error::UnknownSpace(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn loads_documented_examples() {
        let c = load_complex(r#"{"name":"circle3","vertices":3,"simplices":[[0,1],[0,2],[1,2]]}"#)
            .unwrap();
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.name, "circle3");
        let s = load_complex(r#"{"vertices":4,"simplices":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]}"#)
            .unwrap();
        assert_eq!(s.dimension(), 2);
        assert_eq!(s.basepoint, 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            load_complex(r#"{"vertices":2,"simplices":[[0,0]]}"#),
            Err(Error::DuplicateVertex { vertex: 0, .. })
        ));
        assert!(matches!(
            load_complex(r#"{"vertices":2,"simplices":[[0,2]]}"#),
            Err(Error::VertexOutOfRange { vertex: 2, .. })
        ));
        assert!(matches!(
            load_complex(r#"{"vertices":4,"simplices":[[0,1],[2,3]]}"#),
            Err(Error::Disconnected(_))
        ));
        assert!(matches!(
            load_complex(r#"{"vertices":3,"simplices":[[1,0],[1,2]]}"#),
            Err(Error::Unordered { .. })
        ));
        assert!(matches!(load_complex("{not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn builtin_counts() {
        let s2 = builtin_space("sphere2").unwrap();
        assert_eq!(s2.vertex_count, 4);
        assert_eq!(s2.maximal_simplices.len(), 4);
        assert_eq!(s2.f_vector(), vec![4, 6, 4]);

        let t = torus();
        assert_eq!(t.f_vector(), vec![7, 21, 14]);
        assert_eq!(t.euler_characteristic(), 0);

        let p = rp2();
        assert_eq!(p.f_vector(), vec![6, 15, 10]);
        assert_eq!(p.euler_characteristic(), 1);

        assert_eq!(builtin_space("circle(5)").unwrap().f_vector(), vec![5, 5]);
        assert_eq!(builtin_space("wedge_circles2").unwrap().euler_characteristic(), -1);
        assert!(matches!(builtin_space("klein"), Err(Error::UnknownSpace(_))));
        assert!(matches!(builtin_space("circle2"), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn closed_surfaces_are_pseudomanifolds() {
        for spec in [torus(), rp2(), sphere(2).unwrap()] {
            for e in spec.all_simplices().into_iter().filter(|s| s.len() == 2) {
                let n = spec
                    .maximal_simplices
                    .iter()
                    .filter(|t| e.iter().all(|v| t.contains(v)))
                    .count();
                assert_eq!(n, 2, "{}: edge {e:?}", spec.name);
            }
        }
    }

    proptest! {
        #[test]
        fn serialization_round_trips(m in 3u32..9, d in 1u32..4, pick in 0usize..4) {
            let spec = match pick {
                0 => circle(m).unwrap(),
                1 => sphere(d).unwrap(),
                2 => wedge_circles(d).unwrap(),
                _ => torus(),
            };
            let back = load_complex(&spec.to_json()).unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
