//! Words over named generators, evaluation, conjugation, and bounded
//! enumeration for orbit sampling.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::{ExtendedMoebius, SpherePoint, POINT_TOL};

/// A named set of generators and their Möbius values.
///
/// Generator order is significant: enumeration and orbit sampling walk the
/// letters in table order, so outputs are deterministic.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    names: Vec<String>,
    maps: HashMap<String, ExtendedMoebius>,
}

impl GeneratorTable {
    pub fn new() -> Self {
        GeneratorTable {
            names: Vec::new(),
            maps: HashMap::new(),
        }
    }

    /// Insert a generator, keeping insertion order. Replaces the map if the
    /// name already exists (order is unchanged in that case).
    pub fn insert(&mut self, name: &str, map: ExtendedMoebius) {
        if !self.maps.contains_key(name) {
            self.names.push(name.to_string());
        }
        self.maps.insert(name.to_string(), map);
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Result<&ExtendedMoebius> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

impl Default for GeneratorTable {
    fn default() -> Self {
        Self::new()
    }
}

/// One letter of a word: a generator name and an exponent in {+1, −1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub name: String,
    pub exponent: i8,
}

impl Letter {
    pub fn new(name: &str, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1);
        Letter {
            name: name.to_string(),
            exponent,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.name == other.name && self.exponent == -other.exponent
    }
}

/// A word over the generator alphabet; evaluation composes left to right,
/// i.e. the leftmost letter is applied last (function composition order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Parse a compact form like "A·B^-1·A" (also accepts '*' and '.').
    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(Word::empty());
        }
        for piece in trimmed.split(['\u{b7}', '*', '.']) {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            if let Some(base) = piece.strip_suffix("^-1") {
                letters.push(Letter::new(base.trim(), -1));
            } else if let Some(base) = piece.strip_suffix('\'') {
                letters.push(Letter::new(base.trim(), -1));
            } else {
                letters.push(Letter::new(piece, 1));
            }
        }
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "\u{3b5}");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.exponent == 1 {
                    l.name.clone()
                } else {
                    format!("{}^-1", l.name)
                }
            })
            .collect();
        write!(f, "{}", parts.join("\u{b7}"))
    }
}

/// Compose the letters' maps left to right.
pub fn evaluate(table: &GeneratorTable, w: &Word) -> Result<ExtendedMoebius> {
    let mut acc = ExtendedMoebius::identity();
    for letter in &w.letters {
        let m = table.get(&letter.name)?;
        let m = if letter.exponent == 1 {
            m.clone()
        } else {
            m.inverse()
        };
        acc = acc.compose(&m);
    }
    Ok(acc)
}

/// by ∘ f ∘ by⁻¹.
pub fn conjugate(f: &ExtendedMoebius, by: &ExtendedMoebius) -> ExtendedMoebius {
    by.compose(f).compose(&by.inverse())
}

/// All reduced words of length ≤ max_len, breadth-first by length.
/// Within a length class the order follows table order of the last letter,
/// positive exponent before negative, extending each shorter word in turn.
pub fn enumerate_reduced_words(names: &[String], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for name in names {
                for &exp in &[1i8, -1i8] {
                    let letter = Letter::new(name, exp);
                    if let Some(last) = w.letters.last() {
                        if last.cancels(&letter) {
                            continue;
                        }
                    }
                    let mut letters = w.letters.clone();
                    letters.push(letter);
                    next.push(Word::from_letters(letters));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Images of `seed` under every reduced word of length ≤ max_len,
/// deduplicated by the chordal tolerance. Deterministic order.
///
/// The walk extends words on the left (new letter applied to the current
/// image), so each point costs one Möbius application.
pub fn orbit_samples(
    table: &GeneratorTable,
    seed: &SpherePoint,
    max_len: usize,
) -> Result<Vec<SpherePoint>> {
    orbit_samples_with_tol(table, seed, max_len, POINT_TOL)
}

/// Deduplicating point store: points are mapped to the unit 2-sphere
/// (where Euclidean distance = 2 × chordal distance) and hashed into a
/// coarse 3D grid. Neighboring cells are probed only when a point sits
/// within the tolerance of a cell wall, so a lookup usually costs one
/// table read. The table stores chain heads only — cell keys are not
/// kept, so slots whose cells collide simply share a chain; the exact
/// distance check below keeps the result independent of collisions.
struct PointDedup {
    points: Vec<SpherePoint>,
    /// Sphere coordinates of each stored point plus the chain link, kept
    /// together so a chain step costs one memory access.
    entries: Vec<CellEntry>,
    heads: Vec<u32>,
    mask: u64,
    cell: f64,
    tol: f64,
}

struct CellEntry {
    xyz: [f64; 3],
    next: u32,
}

const NO_POINT: u32 = u32::MAX;

fn cell_slot(base: [i32; 3], mask: u64) -> usize {
    let mut h = 0u64;
    for c in base {
        h = (h ^ c as u32 as u64).wrapping_mul(0x9e3779b97f4a7c15);
        h ^= h >> 29;
    }
    h = h.wrapping_mul(0xff51afd7ed558ccd);
    h ^= h >> 33;
    (h & mask) as usize
}

impl PointDedup {
    fn new(tol: f64, capacity: usize) -> Self {
        let tol = tol.max(1e-15);
        // ~4 slots per expected point keeps cell collisions rare.
        let slots = (capacity.saturating_mul(4)).next_power_of_two().max(1024);
        PointDedup {
            points: Vec::with_capacity(capacity),
            entries: Vec::with_capacity(capacity),
            heads: vec![NO_POINT; slots],
            mask: (slots - 1) as u64,
            // 3D separation of chordal-tol duplicates is 2·tol; a coarse
            // cell keeps wall-adjacency (and neighbor probing) rare.
            cell: 16.0 * tol,
            tol,
        }
    }

    fn sphere_coords(p: &SpherePoint) -> [f64; 3] {
        // p is normalized: |u|² + |v|² = 1.
        let uv = p.u * p.v.conj();
        [
            2.0 * uv.re,
            2.0 * uv.im,
            p.u.norm_sqr() - p.v.norm_sqr(),
        ]
    }

    /// Insert if no stored point lies within the chordal tolerance.
    fn insert(&mut self, p: &SpherePoint) -> bool {
        let p = p.normalized();
        let xyz = Self::sphere_coords(&p);
        let sep = 2.0 * self.tol; // Euclidean counterpart of the tolerance
        let base: [i32; 3] = std::array::from_fn(|i| (xyz[i] / self.cell).floor() as i32);
        // per-axis cell offsets to probe: 0 always, ±1 when near a wall
        let axis_offsets: [&[i32]; 3] = std::array::from_fn(|i| {
            let frac = xyz[i] - (base[i] as f64) * self.cell;
            if frac < sep {
                &[0, -1][..]
            } else if frac > self.cell - sep {
                &[0, 1][..]
            } else {
                &[0][..]
            }
        });
        let sep2 = sep * sep;
        let near = |xyz: &[f64; 3], at: u32| {
            let mut at = at;
            while at != NO_POINT {
                let e = &self.entries[at as usize];
                let d2 = (e.xyz[0] - xyz[0]).powi(2)
                    + (e.xyz[1] - xyz[1]).powi(2)
                    + (e.xyz[2] - xyz[2]).powi(2);
                if d2 <= sep2 {
                    return true;
                }
                at = e.next;
            }
            false
        };
        let base_slot = cell_slot(base, self.mask);
        if near(&xyz, self.heads[base_slot]) {
            return false;
        }
        for &dx in axis_offsets[0] {
            for &dy in axis_offsets[1] {
                for &dz in axis_offsets[2] {
                    if dx == 0 && dy == 0 && dz == 0 {
                        continue;
                    }
                    let slot =
                        cell_slot([base[0] + dx, base[1] + dy, base[2] + dz], self.mask);
                    if slot != base_slot && near(&xyz, self.heads[slot]) {
                        return false;
                    }
                }
            }
        }
        let idx = self.points.len() as u32;
        self.entries.push(CellEntry {
            xyz,
            next: self.heads[base_slot],
        });
        self.heads[base_slot] = idx;
        self.points.push(p);
        true
    }
}

pub fn orbit_samples_with_tol(
    table: &GeneratorTable,
    seed: &SpherePoint,
    max_len: usize,
    tol: f64,
) -> Result<Vec<SpherePoint>> {
    // Pre-resolve the letters so the walk never touches the name map.
    let mut letters: Vec<ExtendedMoebius> = Vec::new();
    for name in table.names() {
        let m = table.get(name)?;
        letters.push(m.clone());
        letters.push(m.inverse());
    }

    // free-group ball size bounds the point count; cap the preallocation
    let k = letters.len().max(1);
    let mut ball: usize = 1;
    let mut layer: usize = k;
    for _ in 0..max_len {
        ball = ball.saturating_add(layer);
        layer = layer.saturating_mul(k.saturating_sub(1).max(1));
    }
    let mut dedup = PointDedup::new(tol, ball.min(20_000_000));
    let seed = seed.normalized();
    dedup.insert(&seed);

    // Depth-first left extension: the new letter is applied to the
    // current image, so each reduced word costs one Möbius application
    // and the stack stays at most max_len deep.
    struct Walk<'a> {
        letters: &'a [ExtendedMoebius],
        dedup: &'a mut PointDedup,
    }
    impl Walk<'_> {
        fn go(&mut self, p: &SpherePoint, first_code: usize, depth: usize) {
            if depth == 0 {
                return;
            }
            for (code, m) in self.letters.iter().enumerate() {
                if code ^ 1 == first_code {
                    continue; // would cancel against the leftmost letter
                }
                let q = m.apply(p).normalized();
                self.dedup.insert(&q);
                self.go(&q, code, depth - 1);
            }
        }
    }
    Walk {
        letters: &letters,
        dedup: &mut dedup,
    }
    .go(&seed, usize::MAX, max_len);
    Ok(dedup.points)
}

/// CSV with header `re,im`; the point at infinity is written as `inf,inf`.
pub fn points_to_csv(points: &[SpherePoint]) -> String {
    let mut out = String::from("re,im\n");
    for p in points {
        if p.is_infinite() {
            out.push_str("inf,inf\n");
        } else {
            let z = p.to_complex().unwrap();
            out.push_str(&format!("{},{}\n", z.re, z.im));
        }
    }
    out
}

/// Plain SVG scatter chart of the plane over the given viewport
/// (x0, y0, x1, y1); points outside the viewport (and ∞) are dropped.
pub fn points_to_svg(
    points: &[SpherePoint],
    viewport: (f64, f64, f64, f64),
    size_px: u32,
) -> String {
    let (x0, y0, x1, y1) = viewport;
    let w = size_px as f64;
    let h = w * (y1 - y0) / (x1 - x0);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.0} {:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        w, h, w, h
    );
    let sx = w / (x1 - x0);
    let sy = h / (y1 - y0);
    for p in points {
        if p.is_infinite() {
            continue;
        }
        let z = p.to_complex().unwrap();
        if z.re < x0 || z.re > x1 || z.im < y0 || z.im > y1 {
            continue;
        }
        let px = (z.re - x0) * sx;
        // SVG y grows downward.
        let py = h - (z.im - y0) * sy;
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"1.2\" fill=\"black\"/>\n",
            px, py
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Convenience: parse "re,im" into a Complex64.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::OutOfRange(format!(
            "expected complex as \"re,im\", got {s:?}"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::OutOfRange(format!("bad real part in {s:?}")))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::OutOfRange(format!("bad imaginary part in {s:?}")))?;
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::projectively_equal;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat(a: f64, b: f64, cc: f64, d: f64) -> ExtendedMoebius {
        ExtendedMoebius::conformal(c(a, 0.0), c(b, 0.0), c(cc, 0.0), c(d, 0.0)).unwrap()
    }

    fn ab_table() -> GeneratorTable {
        let mut t = GeneratorTable::new();
        t.insert("A", mat(-1.0, -2.0, 0.0, -1.0));
        t.insert("B", mat(-1.0, 0.0, 2.0, -1.0));
        t
    }

    #[test]
    fn evaluate_product_ab() {
        let t = ab_table();
        let w = Word::parse("A\u{b7}B").unwrap();
        let m = evaluate(&t, &w).unwrap();
        let expected = mat(-3.0, 2.0, -2.0, 1.0);
        assert!(projectively_equal(&m, &expected, 1e-12));
    }

    #[test]
    fn evaluate_empty_and_cancellation() {
        let t = ab_table();
        assert!(evaluate(&t, &Word::empty()).unwrap().is_identity(1e-12));
        let w = Word::parse("A\u{b7}A^-1").unwrap();
        assert!(evaluate(&t, &w).unwrap().is_identity(1e-12));
    }

    #[test]
    fn evaluate_unknown_generator() {
        let t = ab_table();
        let w = Word::parse("Z").unwrap();
        assert!(matches!(
            evaluate(&t, &w),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn conjugate_b_by_half_twist() {
        // conjugate(B, A^{1/2}) should be (AB)^{-1} = [1,-2;2,-3].
        let t = ab_table();
        let half = mat(1.0, 1.0, 0.0, 1.0);
        let b = t.get("B").unwrap();
        let got = conjugate(b, &half);
        let expected = mat(1.0, -2.0, 2.0, -3.0);
        assert!(projectively_equal(&got, &expected, 1e-12));
    }

    #[test]
    fn conjugate_by_identity() {
        let t = ab_table();
        let b = t.get("B").unwrap();
        let got = conjugate(b, &ExtendedMoebius::identity());
        assert!(projectively_equal(&got, b, 1e-12));
    }

    #[test]
    fn reduced_word_counts() {
        let n1 = vec!["A".to_string()];
        assert_eq!(enumerate_reduced_words(&n1, 2).len(), 5);
        let n2 = vec!["A".to_string(), "B".to_string()];
        assert_eq!(enumerate_reduced_words(&n2, 1).len(), 5);
        assert_eq!(enumerate_reduced_words(&n2, 2).len(), 17);
        // free-group ball: 1 + Σ 2k(2k−1)^{j−1}
        let ball = |k: usize, l: usize| {
            let mut n = 1usize;
            let mut layer = 2 * k;
            for _ in 0..l {
                n += layer;
                layer *= 2 * k - 1;
            }
            n
        };
        for k in 1..=3usize {
            let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
            for l in 0..=4usize {
                assert_eq!(enumerate_reduced_words(&names, l).len(), ball(k, l));
            }
        }
    }

    #[test]
    fn rank_one_ball() {
        let words = enumerate_reduced_words(&["A".to_string()], 2);
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(
            rendered,
            vec![
                "\u{3b5}",
                "A",
                "A^-1",
                "A\u{b7}A",
                "A^-1\u{b7}A^-1"
            ]
        );
    }

    #[test]
    fn translation_orbit() {
        let mut t = GeneratorTable::new();
        t.insert("A", ExtendedMoebius::translation(c(2.0, 0.0)));
        let seed = SpherePoint::finite(c(0.0, 0.0));
        let pts = orbit_samples(&t, &seed, 3).unwrap();
        let mut xs: Vec<f64> = pts.iter().map(|p| p.to_complex().unwrap().re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [-6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0];
        assert_eq!(xs.len(), expected.len());
        for (got, want) in xs.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_length_orbit_is_seed() {
        let t = ab_table();
        let seed = SpherePoint::finite(c(0.0, 1.0));
        let pts = orbit_samples(&t, &seed, 0).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].approx_eq(&seed, 1e-12));
    }

    #[test]
    fn orbit_monotone_in_length() {
        let t = ab_table();
        let seed = SpherePoint::finite(c(0.0, 1.0));
        let small = orbit_samples(&t, &seed, 3).unwrap();
        let large = orbit_samples(&t, &seed, 5).unwrap();
        assert!(small.len() <= large.len());
        for p in &small {
            assert!(large.iter().any(|q| q.approx_eq(p, 1e-8)));
        }
    }

    #[test]
    fn orbit_matches_word_enumeration() {
        // Cross-check the incremental walk against direct evaluation of
        // every reduced word.
        let t = ab_table();
        let seed = SpherePoint::finite(c(0.25, 1.5));
        let fast = orbit_samples(&t, &seed, 4).unwrap();
        let words = enumerate_reduced_words(
            &["A".to_string(), "B".to_string()],
            4,
        );
        let mut slow: Vec<SpherePoint> = Vec::new();
        for w in &words {
            let m = evaluate(&t, &w).unwrap();
            let q = m.apply(&seed);
            if !slow.iter().any(|p| p.approx_eq(&q, POINT_TOL)) {
                slow.push(q);
            }
        }
        assert_eq!(fast.len(), slow.len());
        for p in &slow {
            assert!(fast.iter().any(|q| q.approx_eq(p, 1e-7)));
        }
    }

    #[test]
    fn csv_has_inf_token() {
        let pts = vec![
            SpherePoint::infinity(),
            SpherePoint::finite(c(1.5, -2.0)),
        ];
        let csv = points_to_csv(&pts);
        assert_eq!(csv, "re,im\ninf,inf\n1.5,-2\n");
    }

    #[test]
    fn svg_drops_out_of_viewport_points() {
        let pts = vec![
            SpherePoint::finite(c(0.0, 0.0)),
            SpherePoint::finite(c(100.0, 0.0)),
            SpherePoint::infinity(),
        ];
        let svg = points_to_svg(&pts, (-3.0, -3.0, 3.0, 3.0), 600);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn parse_complex_round_trip() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), c(1.5, -2.0));
        assert!(parse_complex("nope").is_err());
    }
}
