use std::collections::BTreeMap;

use super::DeckError;
use crate::mesh::{ShellElement, ShellMesh};

enum Block {
    None,
    Node,
    Shell(u32),
    Prop(u32),
}

fn err(line: usize, message: impl Into<String>) -> DeckError {
    DeckError::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, DeckError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

/// Reads the `/NODE`, `/SHELL/<part>` and `/PROP/SHELL/<part>` blocks of a
/// starter deck back into a mesh. Node ids must be contiguous from 1.
pub fn parse_starter_mesh(text: &str) -> Result<ShellMesh, DeckError> {
    let mut block = Block::None;
    let mut title_pending = false;
    let mut nodes = Vec::new();
    let mut elements: BTreeMap<usize, ShellElement> = BTreeMap::new();
    let mut parts = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.starts_with('#') || raw.trim().is_empty() {
            continue;
        }
        if let Some(keyword) = raw.strip_prefix('/') {
            let keyword = keyword.trim();
            title_pending = false;
            block = if keyword == "NODE" {
                Block::Node
            } else if let Some(id) = keyword.strip_prefix("SHELL/") {
                Block::Shell(field(Some(id), line, "part id")?)
            } else if let Some(id) = keyword.strip_prefix("PROP/SHELL/") {
                title_pending = true;
                Block::Prop(field(Some(id), line, "property id")?)
            } else {
                Block::None
            };
            continue;
        }
        let mut tok = raw.split_whitespace();
        match block {
            Block::None => {}
            Block::Node => {
                let id: usize = field(tok.next(), line, "node id")?;
                if id != nodes.len() + 1 {
                    return Err(err(line, format!("node id {id} out of sequence")));
                }
                let x = field(tok.next(), line, "x")?;
                let y = field(tok.next(), line, "y")?;
                let z = field(tok.next(), line, "z")?;
                nodes.push([x, y, z]);
            }
            Block::Shell(part) => {
                let id: usize = field(tok.next(), line, "shell id")?;
                let mut n = [0usize; 4];
                for slot in n.iter_mut() {
                    *slot = field(tok.next(), line, "node reference")?;
                }
                if elements.insert(id, ShellElement { nodes: n, part }).is_some() {
                    return Err(err(line, format!("duplicate shell id {id}")));
                }
            }
            Block::Prop(part) => {
                if title_pending {
                    title_pending = false;
                    continue;
                }
                // the last data line of the block is the thickness
                if let Ok(t) = raw.trim().parse::<f64>() {
                    parts.insert(part, t);
                }
            }
        }
    }

    let count = elements.len();
    if elements.keys().copied().ne(1..=count) {
        return Err(err(0, "shell ids are not contiguous from 1"));
    }
    let elements: Vec<ShellElement> = elements.into_values().collect();
    for e in &elements {
        if e.nodes.iter().any(|&n| n == 0 || n > nodes.len()) {
            return Err(err(0, format!("shell references unknown node {:?}", e.nodes)));
        }
    }
    Ok(ShellMesh {
        nodes,
        elements,
        parts,
    })
}
