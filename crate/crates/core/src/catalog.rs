//! Built-in solids: the Platonic solids, thirteen Archimedean solids, the
//! octagonal pyramid and dipyramid, and two Catalan solids.
//!
//! Coordinates come from closed-form vertex lists; faces are recovered as
//! the convex hull of those points, so topology never depends on a
//! hand-typed face table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::{validate_polyhedron, PolyhedronSpec};

/// How long exact enumeration of a solid takes, roughly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tier {
    /// Well under a second.
    Quick,
    /// Seconds to minutes.
    Mid,
    /// Hours or more; only run on request.
    Long,
}

/// Published reference values for a solid. `None` where no value exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub leaves: usize,
    pub optimal_nets: u64,
    pub labeled_mlsts: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub tier: Tier,
    pub reference: Reference,
    build: fn() -> Vec<[f64; 3]>,
}

impl CatalogEntry {
    pub fn spec(&self) -> PolyhedronSpec {
        let points = (self.build)();
        let faces = convex_hull_faces(&points);
        PolyhedronSpec::new(self.name, points, faces)
    }
}

const fn r(
    vertices: usize,
    edges: usize,
    faces: usize,
    leaves: usize,
    optimal_nets: u64,
    labeled: Option<u64>,
) -> Reference {
    Reference {
        vertices,
        edges,
        faces,
        leaves,
        optimal_nets,
        labeled_mlsts: labeled,
    }
}

const fn entry(
    name: &'static str,
    tier: Tier,
    reference: Reference,
    build: fn() -> Vec<[f64; 3]>,
) -> CatalogEntry {
    CatalogEntry {
        name,
        aliases: &[],
        tier,
        reference,
        build,
    }
}

/// Every built-in solid, in increasing order of difficulty within a tier.
pub static CATALOG: &[CatalogEntry] = &[
    entry(
        "tetrahedron",
        Tier::Quick,
        r(4, 6, 4, 3, 1, Some(4)),
        tetrahedron,
    ),
    entry(
        "octahedron",
        Tier::Quick,
        r(6, 12, 8, 4, 2, None),
        octahedron,
    ),
    entry("cube", Tier::Quick, r(8, 12, 6, 4, 4, Some(120)), cube),
    entry(
        "icosahedron",
        Tier::Quick,
        r(12, 30, 20, 8, 21, None),
        icosahedron,
    ),
    entry(
        "dodecahedron",
        Tier::Quick,
        r(20, 30, 12, 10, 21, Some(1980)),
        dodecahedron,
    ),
    entry(
        "octagonal-pyramid",
        Tier::Quick,
        r(9, 16, 9, 8, 1, None),
        octagonal_pyramid,
    ),
    entry(
        "octagonal-dipyramid",
        Tier::Quick,
        r(10, 24, 16, 7, 3, None),
        octagonal_dipyramid,
    ),
    entry(
        "truncated-tetrahedron",
        Tier::Quick,
        r(12, 18, 8, 6, 4, None),
        truncated_tetrahedron,
    ),
    entry(
        "cuboctahedron",
        Tier::Quick,
        r(12, 24, 14, 7, 34, None),
        cuboctahedron,
    ),
    entry(
        "truncated-cube",
        Tier::Mid,
        r(24, 36, 14, 10, 399, None),
        truncated_cube,
    ),
    entry(
        "truncated-octahedron",
        Tier::Mid,
        r(24, 36, 14, 12, 56, None),
        truncated_octahedron,
    ),
    CatalogEntry {
        name: "rhombicuboctahedron",
        aliases: &["small-rhombicuboctahedron"],
        tier: Tier::Mid,
        reference: r(24, 48, 26, 15, 32, Some(1536)),
        build: rhombicuboctahedron,
    },
    entry(
        "snub-cube",
        Tier::Mid,
        r(24, 60, 38, 16, 600, None),
        snub_cube,
    ),
    CatalogEntry {
        name: "truncated-cuboctahedron",
        aliases: &["great-rhombicuboctahedron"],
        tier: Tier::Mid,
        reference: r(48, 72, 26, 24, 244, None),
        build: truncated_cuboctahedron,
    },
    entry(
        "icosidodecahedron",
        Tier::Long,
        r(30, 60, 32, 16, 308_928, None),
        icosidodecahedron,
    ),
    CatalogEntry {
        name: "truncated-icosahedron",
        aliases: &["buckyball"],
        tier: Tier::Long,
        reference: r(60, 90, 32, 30, 4114, Some(484_800)),
        build: truncated_icosahedron,
    },
    entry(
        "truncated-dodecahedron",
        Tier::Long,
        r(60, 90, 32, 22, 3_719_677_167, None),
        truncated_dodecahedron,
    ),
    CatalogEntry {
        name: "rhombicosidodecahedron",
        aliases: &["small-rhombicosidodecahedron"],
        tier: Tier::Long,
        reference: r(60, 120, 62, 37, 77_952, None),
        build: rhombicosidodecahedron,
    },
    entry(
        "snub-dodecahedron",
        Tier::Long,
        r(60, 150, 92, 39, 13_436_928, None),
        snub_dodecahedron,
    ),
    entry(
        "triakis-icosahedron",
        Tier::Long,
        r(32, 90, 60, 26, 664_128, None),
        triakis_icosahedron,
    ),
    entry(
        "pentakis-dodecahedron",
        Tier::Long,
        r(32, 90, 60, 22, 845_280, None),
        pentakis_dodecahedron,
    ),
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Looks a solid up by name or alias; case, spaces and underscores are
/// ignored.
pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    let key: String = name
        .trim()
        .to_ascii_lowercase()
        .chars()
        .map(|c| if c == ' ' || c == '_' { '-' } else { c })
        .collect();
    CATALOG
        .iter()
        .find(|e| e.name == key || e.aliases.contains(&key.as_str()))
        .ok_or_else(|| Error::UnknownBuiltin {
            name: name.to_string(),
            available: names().into_iter().map(String::from).collect(),
        })
}

/// The validated spec of a built-in solid.
pub fn builtin(name: &str) -> Result<PolyhedronSpec> {
    let spec = lookup(name)?.spec();
    let diag = validate_polyhedron(&spec);
    if !diag.passes() {
        return Err(Error::Schema {
            field: format!("builtin {}", spec.name),
            message: format!("{diag:?}"),
        });
    }
    Ok(spec)
}

/// Indices of the `k` faces whose centroids lie highest along z, ties
/// broken by index.
pub fn top_faces(spec: &PolyhedronSpec, k: usize) -> Result<Vec<usize>> {
    let mut keyed = Vec::with_capacity(spec.face_count());
    for f in 0..spec.face_count() {
        let pts = spec.face_points(f)?;
        let z = pts.iter().map(|p| p[2]).sum::<f64>() / pts.len() as f64;
        keyed.push((z, f));
    }
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<usize> = keyed.into_iter().take(k).map(|(_, f)| f).collect();
    out.sort_unstable();
    Ok(out)
}

// ---- convex hull ----------------------------------------------------------

/// Faces of the convex hull of points in convex position, each ordered
/// counter-clockwise seen from outside and starting at its lowest index.
/// Coplanar hull points merge into one face. Faces are listed in order of
/// their sorted vertex sets.
pub fn convex_hull_faces(points: &[[f64; 3]]) -> Vec<Vec<usize>> {
    let n = points.len();
    let scale = points.iter().map(|p| norm(*p)).fold(0.0, f64::max).max(1.0);
    let eps = 1e-9 * scale;
    let mut faces: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross(sub(points[j], points[i]), sub(points[k], points[i]));
                let len = norm(normal);
                if len < eps * scale {
                    continue;
                }
                let normal = [normal[0] / len, normal[1] / len, normal[2] / len];
                let mut above = false;
                let mut below = false;
                let mut on = Vec::new();
                for (m, p) in points.iter().enumerate() {
                    let d = dot(normal, sub(*p, points[i]));
                    if d > eps {
                        above = true;
                    } else if d < -eps {
                        below = true;
                    } else {
                        on.push(m);
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if on[0] != i || on[1] != j || on[2] != k {
                    // the plane was or will be found from its lowest triple
                    continue;
                }
                let outward = if above {
                    [-normal[0], -normal[1], -normal[2]]
                } else {
                    normal
                };
                let cycle = order_ccw(points, &on, outward);
                faces.insert(on, cycle);
            }
        }
    }
    faces.into_values().collect()
}

fn order_ccw(points: &[[f64; 3]], on: &[usize], normal: [f64; 3]) -> Vec<usize> {
    let c = on.iter().fold([0.0; 3], |acc, &i| add(acc, points[i]));
    let c = [
        c[0] / on.len() as f64,
        c[1] / on.len() as f64,
        c[2] / on.len() as f64,
    ];
    let x = sub(points[on[0]], c);
    let y = cross(normal, x);
    let mut keyed: Vec<(f64, usize)> = on
        .iter()
        .map(|&i| {
            let d = sub(points[i], c);
            (
                dot(d, y).atan2(dot(d, x)).rem_euclid(std::f64::consts::TAU),
                i,
            )
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cycle: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    let start = cycle
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(p, _)| p)
        .unwrap();
    cycle.rotate_left(start);
    cycle
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

// ---- vertex generators ----------------------------------------------------

const PHI: f64 = 1.618_033_988_749_895;

/// Tribonacci constant, the real root of t³ = t² + t + 1.
const TRIBONACCI: f64 = 1.839_286_755_214_161_1;

#[derive(Clone, Copy)]
enum Perms {
    All,
    Even,
    Odd,
}

#[derive(Clone, Copy)]
enum Signs {
    All,
    /// An even number of minus signs among the nonzero entries.
    EvenMinus,
    /// Even count of plus signs (for three nonzero entries: odd minus count).
    EvenPlus,
    OddPlus,
}

const EVEN_PERMS: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
const ODD_PERMS: [[usize; 3]; 3] = [[0, 2, 1], [2, 1, 0], [1, 0, 2]];

/// Appends the images of `base` under the given coordinate permutations and
/// sign changes, skipping duplicates.
fn orbit(out: &mut Vec<[f64; 3]>, base: [f64; 3], perms: Perms, signs: Signs) {
    let perm_list: Vec<[usize; 3]> = match perms {
        Perms::All => EVEN_PERMS.iter().chain(ODD_PERMS.iter()).copied().collect(),
        Perms::Even => EVEN_PERMS.to_vec(),
        Perms::Odd => ODD_PERMS.to_vec(),
    };
    for p in perm_list {
        for mask in 0..8u32 {
            let minus = mask.count_ones() as usize;
            let ok = match signs {
                Signs::All => true,
                Signs::EvenMinus => minus.is_multiple_of(2),
                Signs::EvenPlus => (3 - minus).is_multiple_of(2),
                Signs::OddPlus => (3 - minus) % 2 == 1,
            };
            if !ok {
                continue;
            }
            let v = [0, 1, 2].map(|a| {
                let x = base[p[a]];
                if mask >> a & 1 == 1 {
                    -x
                } else {
                    x
                }
            });
            push_unique(out, v);
        }
    }
}

fn push_unique(out: &mut Vec<[f64; 3]>, v: [f64; 3]) {
    let v = v.map(|x| if x == 0.0 { 0.0 } else { x });
    if !out.iter().any(|w| norm(sub(*w, v)) < 1e-9) {
        out.push(v);
    }
}

fn points(bases: &[[f64; 3]], perms: Perms, signs: Signs) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for &b in bases {
        orbit(&mut out, b, perms, signs);
    }
    out
}

fn tetrahedron() -> Vec<[f64; 3]> {
    vec![
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
}

fn cube() -> Vec<[f64; 3]> {
    points(&[[1.0, 1.0, 1.0]], Perms::Even, Signs::All)
}

fn octahedron() -> Vec<[f64; 3]> {
    points(&[[1.0, 0.0, 0.0]], Perms::All, Signs::All)
}

fn icosahedron() -> Vec<[f64; 3]> {
    points(&[[0.0, 1.0, PHI]], Perms::Even, Signs::All)
}

fn dodecahedron() -> Vec<[f64; 3]> {
    points(
        &[[1.0, 1.0, 1.0], [0.0, 1.0 / PHI, PHI]],
        Perms::Even,
        Signs::All,
    )
}

fn octagon_ring() -> Vec<[f64; 3]> {
    (0..8)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_4 * k as f64;
            [a.cos(), a.sin(), 0.0]
        })
        .collect()
}

fn octagonal_pyramid() -> Vec<[f64; 3]> {
    let mut v = vec![[0.0, 0.0, 1.0]];
    v.extend(octagon_ring());
    v
}

fn octagonal_dipyramid() -> Vec<[f64; 3]> {
    let mut v = vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    v.extend(octagon_ring());
    v
}

fn truncated_tetrahedron() -> Vec<[f64; 3]> {
    points(&[[3.0, 1.0, 1.0]], Perms::All, Signs::EvenMinus)
}

fn cuboctahedron() -> Vec<[f64; 3]> {
    points(&[[1.0, 1.0, 0.0]], Perms::All, Signs::All)
}

fn truncated_cube() -> Vec<[f64; 3]> {
    let xi = std::f64::consts::SQRT_2 - 1.0;
    points(&[[xi, 1.0, 1.0]], Perms::All, Signs::All)
}

fn truncated_octahedron() -> Vec<[f64; 3]> {
    points(&[[0.0, 1.0, 2.0]], Perms::All, Signs::All)
}

fn rhombicuboctahedron() -> Vec<[f64; 3]> {
    points(
        &[[1.0, 1.0, 1.0 + std::f64::consts::SQRT_2]],
        Perms::All,
        Signs::All,
    )
}

fn snub_cube() -> Vec<[f64; 3]> {
    let t = TRIBONACCI;
    let base = [1.0, 1.0 / t, t];
    let mut out = Vec::new();
    orbit(&mut out, base, Perms::Even, Signs::EvenPlus);
    orbit(&mut out, base, Perms::Odd, Signs::OddPlus);
    out
}

fn truncated_cuboctahedron() -> Vec<[f64; 3]> {
    let s = std::f64::consts::SQRT_2;
    points(&[[1.0, 1.0 + s, 1.0 + 2.0 * s]], Perms::All, Signs::All)
}

fn icosidodecahedron() -> Vec<[f64; 3]> {
    let mut out = points(&[[0.0, 0.0, PHI]], Perms::All, Signs::All);
    orbit(
        &mut out,
        [0.5, PHI / 2.0, PHI * PHI / 2.0],
        Perms::Even,
        Signs::All,
    );
    out
}

fn truncated_icosahedron() -> Vec<[f64; 3]> {
    points(
        &[
            [0.0, 1.0, 3.0 * PHI],
            [1.0, 2.0 + PHI, 2.0 * PHI],
            [PHI, 2.0, PHI.powi(3)],
        ],
        Perms::Even,
        Signs::All,
    )
}

fn truncated_dodecahedron() -> Vec<[f64; 3]> {
    points(
        &[
            [0.0, 1.0 / PHI, 2.0 + PHI],
            [1.0 / PHI, PHI, 2.0 * PHI],
            [PHI, 2.0, PHI + 1.0],
        ],
        Perms::Even,
        Signs::All,
    )
}

fn rhombicosidodecahedron() -> Vec<[f64; 3]> {
    points(
        &[
            [1.0, 1.0, PHI.powi(3)],
            [PHI * PHI, PHI, 2.0 * PHI],
            [2.0 + PHI, 0.0, PHI * PHI],
        ],
        Perms::Even,
        Signs::All,
    )
}

fn snub_dodecahedron() -> Vec<[f64; 3]> {
    // ξ is the real root of ξ³ - 2ξ = φ
    let mut xi = 1.7f64;
    for _ in 0..60 {
        xi -= (xi.powi(3) - 2.0 * xi - PHI) / (3.0 * xi * xi - 2.0);
    }
    let a = xi - 1.0 / xi;
    let b = xi * PHI + PHI * PHI + PHI / xi;
    let bases = [
        [2.0 * a, 2.0, 2.0 * b],
        [
            a + b / PHI + PHI,
            -a * PHI + b + 1.0 / PHI,
            a / PHI + b * PHI - 1.0,
        ],
        [
            -a / PHI + b * PHI + 1.0,
            -a + b / PHI - PHI,
            a * PHI + b - 1.0 / PHI,
        ],
        [
            -a / PHI + b * PHI - 1.0,
            a - b / PHI - PHI,
            a * PHI + b + 1.0 / PHI,
        ],
        [
            a + b / PHI - PHI,
            a * PHI - b + 1.0 / PHI,
            a / PHI + b * PHI + 1.0,
        ],
    ];
    points(&bases, Perms::Even, Signs::EvenPlus)
}

/// Polar reciprocal about the origin: one vertex per face plane.
fn dual_vertices(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    convex_hull_faces(points)
        .iter()
        .map(|face| {
            let pts: Vec<[f64; 3]> = face.iter().map(|&i| points[i]).collect();
            let mut n = [0.0; 3];
            for i in 0..pts.len() {
                n = add(n, cross(pts[i], pts[(i + 1) % pts.len()]));
            }
            let len = norm(n);
            let n = [n[0] / len, n[1] / len, n[2] / len];
            let d = dot(n, pts[0]);
            [n[0] / d, n[1] / d, n[2] / d]
        })
        .collect()
}

fn triakis_icosahedron() -> Vec<[f64; 3]> {
    dual_vertices(&truncated_dodecahedron())
}

fn pentakis_dodecahedron() -> Vec<[f64; 3]> {
    dual_vertices(&truncated_icosahedron())
}
