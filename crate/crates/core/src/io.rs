//! JSON interchange formats.
//!
//! * Game: `{"n", "symmetric", "class", "valuations": [[i, j, "num/den"], ...]}`.
//!   Omitted pairs are 0; symmetric games may list one direction per pair.
//!   Games with more than [`EXPLICIT_LIMIT`] agents are written in block
//!   form instead: `"blocks"` assigns each agent a block id and
//!   `"block_valuations"` lists `[r, c, "num/den"]` between blocks.
//! * Partition: `[[0, 1, 2], [3], [4, 5]]` over agents `0..n`.
//! * Update: `{"D": [..], "E": [..], "entries": [[i, j, "num/den"], ...]}`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::game::{ClassTag, Game};
use crate::partition::{Partition, Target};
use crate::rational::Rational;

/// Largest agent count written with explicit pairwise valuations.
pub const EXPLICIT_LIMIT: usize = 256;

#[derive(Serialize, Deserialize)]
struct GameFile {
    n: usize,
    symmetric: bool,
    class: ClassTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuations: Option<Vec<(usize, usize, Rational)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block_valuations: Option<Vec<(usize, usize, Rational)>>,
}

impl From<&Game> for GameFile {
    fn from(g: &Game) -> Self {
        if g.n() <= EXPLICIT_LIMIT {
            let valuations = g.nonzero_entries().map(|(i, j, v)| (i, j, v.clone())).collect();
            return GameFile {
                n: g.n(),
                symmetric: g.is_symmetric(),
                class: g.class(),
                valuations: Some(valuations),
                blocks: None,
                block_valuations: None,
            };
        }
        let nb = g.num_blocks();
        let mut bv = Vec::new();
        for r in 0..nb {
            for c in 0..nb {
                let v = g.block_value(r, c);
                if !v.is_zero() && (r != c || g.block_size(r) >= 2) {
                    bv.push((r, c, v.clone()));
                }
            }
        }
        GameFile {
            n: g.n(),
            symmetric: g.is_symmetric(),
            class: g.class(),
            valuations: None,
            blocks: Some(g.block_assignment().to_vec()),
            block_valuations: Some(bv),
        }
    }
}

impl TryFrom<GameFile> for Game {
    type Error = Error;

    fn try_from(f: GameFile) -> Result<Game> {
        match (f.valuations, f.blocks, f.block_valuations) {
            (vals, None, None) => Game::from_entries(f.n, f.symmetric, f.class, vals.unwrap_or_default()),
            (None, Some(blocks), bv) => {
                if blocks.len() != f.n {
                    return Err(Error::Input(format!(
                        "\"blocks\" has {} entries but n = {}",
                        blocks.len(),
                        f.n
                    )));
                }
                let nb = blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
                let mut values = vec![Rational::zero(); nb * nb];
                let mut set = vec![false; nb * nb];
                for (r, c, v) in bv.unwrap_or_default() {
                    if r >= nb || c >= nb {
                        return Err(Error::Input(format!("block pair ({r}, {c}) out of range")));
                    }
                    let mut put = |a: usize, b: usize| -> Result<()> {
                        if set[a * nb + b] && values[a * nb + b] != v {
                            return Err(Error::Input(format!("conflicting values for block pair ({a}, {b})")));
                        }
                        set[a * nb + b] = true;
                        values[a * nb + b] = v.clone();
                        Ok(())
                    };
                    put(r, c)?;
                    if f.symmetric {
                        put(c, r)?;
                    }
                }
                Game::from_blocks(blocks, values, f.symmetric, f.class)
            }
            _ => Err(Error::Input(
                "a game lists either \"valuations\" or \"blocks\" with \"block_valuations\"".into(),
            )),
        }
    }
}

impl Serialize for Game {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GameFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Game {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = GameFile::deserialize(d)?;
        Game::try_from(f).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coalitions().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cs = Vec::<Vec<usize>>::deserialize(d)?;
        let n = cs.iter().map(Vec::len).sum();
        Partition::from_coalitions(n, cs).map_err(serde::de::Error::custom)
    }
}

/// A target as JSON: the coalition index, or `"new"`.
pub fn target_json(t: Target) -> serde_json::Value {
    match t {
        Target::Coalition(c) => serde_json::Value::from(c),
        Target::NewSingleton => serde_json::Value::from("new"),
    }
}

pub(crate) fn serialize_target<S: Serializer>(t: &Target, s: S) -> std::result::Result<S::Ok, S::Error> {
    match t {
        Target::Coalition(c) => s.serialize_u64(*c as u64),
        Target::NewSingleton => s.serialize_str("new"),
    }
}

/// Decodes JSON text, reporting line and column on failure.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    from_json_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable data")
}
