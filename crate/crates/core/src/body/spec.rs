//! Line-oriented body description format.
//!
//! ```text
//! # unit ball in R^3
//! kind = ball
//! dim = 3
//! center = 0 0 0
//! radius = 1
//! ```
//!
//! Keys: `kind`, `dim`, `center`, `radius`, `semi_axes`, `height`,
//! `halfspace = n1 .. nd ; offset` (repeatable), `anchor`,
//! `factors = line; space 2; halfline; interval lo hi; ball k r`,
//! `rotation` (row-major `d*d`) and `translation`. Numbers may be separated
//! by whitespace or commas. Unknown keys are rejected.

use std::collections::BTreeMap;

use super::{ConvexBody, Factor};
use crate::error::{Error, Result};
use crate::linalg::Rigid;

const KEYS: &[&str] = &[
    "kind",
    "dim",
    "center",
    "radius",
    "semi_axes",
    "height",
    "halfspace",
    "anchor",
    "factors",
    "rotation",
    "translation",
];

struct Entry {
    line: usize,
    value: String,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line, format!("not a finite number: `{t}`")))
        })
        .collect()
}

struct Doc {
    single: BTreeMap<&'static str, Entry>,
    halfspaces: Vec<Entry>,
}

impl Doc {
    fn parse(text: &str) -> Result<Self> {
        let mut single = BTreeMap::new();
        let mut halfspaces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim().to_string();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(line, format!("unknown key `{key}`")));
            };
            let entry = Entry { line, value };
            if known == "halfspace" {
                halfspaces.push(entry);
            } else if single.insert(known, entry).is_some() {
                return Err(err(line, format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { single, halfspaces })
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.single.get(key)
    }

    fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key)
            .ok_or_else(|| err(0, format!("missing required key `{key}`")))
    }

    fn scalar(&self, key: &str) -> Result<Option<f64>> {
        let Some(e) = self.get(key) else {
            return Ok(None);
        };
        match numbers(e.line, &e.value)?.as_slice() {
            [x] => Ok(Some(*x)),
            _ => Err(err(e.line, format!("`{key}` takes one number"))),
        }
    }

    fn vector(&self, key: &str, dim: usize) -> Result<Option<Vec<f64>>> {
        let Some(e) = self.get(key) else {
            return Ok(None);
        };
        let v = numbers(e.line, &e.value)?;
        if v.len() != dim {
            return Err(err(
                e.line,
                format!("`{key}` needs {dim} numbers, got {}", v.len()),
            ));
        }
        Ok(Some(v))
    }

    /// Reports the first key present that `kind` does not use.
    fn forbid(&self, kind: &str, allowed: &[&str]) -> Result<()> {
        for (k, e) in &self.single {
            if !allowed.contains(k) && !["kind", "dim", "rotation", "translation"].contains(k) {
                return Err(err(e.line, format!("key `{k}` does not apply to kind `{kind}`")));
            }
        }
        if !allowed.contains(&"halfspace") {
            if let Some(e) = self.halfspaces.first() {
                return Err(err(e.line, format!("key `halfspace` does not apply to kind `{kind}`")));
            }
        }
        Ok(())
    }
}

fn halfspace(e: &Entry, dim: usize) -> Result<(Vec<f64>, f64)> {
    let (n, b) = e
        .value
        .split_once(';')
        .ok_or_else(|| err(e.line, "expected `n1 .. nd ; offset`"))?;
    let n = numbers(e.line, n)?;
    if n.len() != dim {
        return Err(err(e.line, format!("normal needs {dim} numbers, got {}", n.len())));
    }
    match numbers(e.line, b)?.as_slice() {
        [b] => Ok((n, *b)),
        _ => Err(err(e.line, "offset must be one number")),
    }
}

fn factor(line: usize, text: &str) -> Result<Factor> {
    let mut words = text.split_whitespace();
    let name = words.next().ok_or_else(|| err(line, "empty factor"))?;
    let rest: Vec<&str> = words.collect();
    let args = numbers(line, &rest.join(" "))?;
    let int = |x: f64| -> Result<usize> {
        if x >= 1.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(err(line, format!("factor dimension must be a positive integer, got {x}")))
        }
    };
    match (name, args.as_slice()) {
        ("line", []) => Ok(Factor::Line),
        ("halfline", []) => Ok(Factor::HalfLine),
        ("space", [k]) => Ok(Factor::Space(int(*k)?)),
        ("interval", [lo, hi]) => Ok(Factor::Interval { lo: *lo, hi: *hi }),
        ("ball", [k, r]) => Ok(Factor::Ball {
            dim: int(*k)?,
            radius: *r,
        }),
        _ => Err(err(line, format!("cannot read factor `{text}`"))),
    }
}

/// Parses a body description.
pub fn parse_body(text: &str) -> Result<ConvexBody> {
    let doc = Doc::parse(text)?;
    let kind_entry = doc.require("kind")?;
    let kind = kind_entry.value.as_str();
    let at = |e: Error, line: usize| match e {
        Error::Parse { .. } => e,
        other => err(line, other.to_string()),
    };

    let dim = match doc.scalar("dim")? {
        Some(d) if d >= 1.0 && d.fract() == 0.0 => Some(d as usize),
        Some(d) => return Err(err(doc.require("dim")?.line, format!("bad dimension {d}"))),
        None => None,
    };

    let body = match kind {
        "ball" => {
            doc.forbid(kind, &["center", "radius"])?;
            let dim = dim.ok_or_else(|| err(0, "missing required key `dim`"))?;
            let center = doc.vector("center", dim)?.unwrap_or_else(|| vec![0.0; dim]);
            let radius = doc.scalar("radius")?.unwrap_or(1.0);
            ConvexBody::ball(center, radius)
        }
        "halfspace" => {
            doc.forbid(kind, &["halfspace"])?;
            let dim = dim.ok_or_else(|| err(0, "missing required key `dim`"))?;
            match doc.halfspaces.as_slice() {
                [e] => {
                    let (n, b) = halfspace(e, dim)?;
                    ConvexBody::halfspace(&n, b)
                }
                _ => return Err(err(kind_entry.line, "kind `halfspace` takes exactly one `halfspace` line")),
            }
        }
        "ellipsoid" => {
            doc.forbid(kind, &["center", "semi_axes"])?;
            let dim = dim.ok_or_else(|| err(0, "missing required key `dim`"))?;
            let center = doc.vector("center", dim)?.unwrap_or_else(|| vec![0.0; dim]);
            let axes = doc
                .vector("semi_axes", dim)?
                .ok_or_else(|| err(0, "missing required key `semi_axes`"))?;
            ConvexBody::ellipsoid(center, axes)
        }
        "cylinder" => {
            doc.forbid(kind, &["radius", "height"])?;
            let dim = dim.ok_or_else(|| err(0, "missing required key `dim`"))?;
            let radius = doc.scalar("radius")?.unwrap_or(1.0);
            let height = doc.scalar("height")?.unwrap_or(1.0);
            ConvexBody::cylinder(dim, radius, height)
        }
        "polytope" => {
            doc.forbid(kind, &["halfspace", "anchor"])?;
            let dim = dim.ok_or_else(|| err(0, "missing required key `dim`"))?;
            let hs = doc
                .halfspaces
                .iter()
                .map(|e| halfspace(e, dim))
                .collect::<Result<Vec<_>>>()?;
            let anchor = doc.vector("anchor", dim)?.unwrap_or_else(|| vec![0.0; dim]);
            ConvexBody::polytope(&hs, anchor)
        }
        "product" => {
            doc.forbid(kind, &["factors"])?;
            let e = doc.require("factors")?;
            let factors = e
                .value
                .split(';')
                .map(|f| factor(e.line, f.trim()))
                .collect::<Result<Vec<_>>>()?;
            let total: usize = factors.iter().map(Factor::dim).sum();
            if let Some(d) = dim {
                if d != total {
                    return Err(err(e.line, format!("factors span {total} dimensions, dim is {d}")));
                }
            }
            ConvexBody::product(factors)
        }
        other => return Err(err(kind_entry.line, format!("unknown kind `{other}`"))),
    }
    .map_err(|e| at(e, kind_entry.line))?;

    let d = body.dim();
    let rotation = match doc.get("rotation") {
        Some(e) => {
            let r = numbers(e.line, &e.value)?;
            if r.len() != d * d {
                return Err(err(e.line, format!("rotation needs {} numbers, got {}", d * d, r.len())));
            }
            Some((e.line, r))
        }
        None => None,
    };
    let translation = doc.vector("translation", d)?;
    if rotation.is_none() && translation.is_none() {
        return Ok(body);
    }
    let line = rotation.as_ref().map(|r| r.0).unwrap_or(0);
    let rot = rotation.map(|r| r.1).unwrap_or_else(|| {
        (0..d * d).map(|k| if k / d == k % d { 1.0 } else { 0.0 }).collect()
    });
    let motion = Rigid::new(rot, translation.unwrap_or_else(|| vec![0.0; d])).map_err(|e| at(e, line))?;
    body.transformed(&motion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{BodyKind, Region};

    #[test]
    fn parses_each_kind() {
        let b = parse_body("kind = ball\ndim = 3\ncenter = 0, 0, 0\nradius = 2\n").unwrap();
        assert_eq!(b.kind(), BodyKind::Ball);
        assert_eq!(b.contains(&[1.9, 0.0, 0.0]).unwrap(), Region::Interior);

        let h = parse_body("kind = halfspace\ndim = 3\nhalfspace = -1 0 0 ; 0\n").unwrap();
        assert_eq!(h.boundary_distance(&[2.0, 1.0, 1.0]).unwrap(), 2.0);

        let p = parse_body(
            "kind = polytope\ndim = 3\n\
             halfspace = 1 0 0 ; 1\nhalfspace = -1 0 0 ; 1\n\
             halfspace = 0 1 0 ; 1\nhalfspace = 0 -1 0 ; 1\n\
             halfspace = 0 0 1 ; 1\nhalfspace = 0 0 -1 ; 1\n",
        )
        .unwrap();
        assert!(p.is_bounded());

        let rx = parse_body("kind = product  # R x disc\nfactors = line; ball 2 1\n").unwrap();
        assert_eq!(rx.dim(), 3);
        assert!(!rx.contains_two_flat());

        let moved = parse_body(
            "kind = cylinder\ndim = 3\nradius = 1\nheight = 1\n\
             rotation = 0 -1 0  1 0 0  0 0 1\ntranslation = 1 2 3\n",
        )
        .unwrap();
        assert_eq!(moved.contains(&[1.0, 2.0, 3.5]).unwrap(), Region::Interior);
    }

    #[test]
    fn rejects_unknown_and_misplaced_keys() {
        let e = parse_body("kind = ball\ndim = 3\ncolour = red\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse_body("kind = ball\ndim = 3\nheight = 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
        let e = parse_body("kind = ball\ndim = 3\nradius = -1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_body("kind = torus\ndim = 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        assert!(parse_body("dim = 3\n").is_err());
        assert!(parse_body("kind = ball\ndim = 3\ncenter = 0 0\n").is_err());
    }
}
