//! Enumeration of all vertex covers of size at most `k`.
//!
//! Solutions are indicator strings over `{'0','1'}` of length `V`, vertex 0
//! first. The search branches on the endpoints of the first uncovered edge
//! while below the size budget, and from every cover additionally branches
//! into its one-vertex extensions, so supersets of minimal covers are
//! reached too.

use std::collections::HashSet;

use crate::error::EnumError;
use crate::problem::{ProblemDescriptor, Solution};
use crate::problems::ParseError;
use crate::process::{Burst, EnumProcess};

/// Upper limit on vertex count so covers fit in a `u128` bitmask.
pub const MAX_VERTICES: u32 = 128;

/// An undirected graph with a cover-size budget `k`.
///
/// Edges are stored with the smaller endpoint first, in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    vertices: u32,
    edges: Vec<(u32, u32)>,
    k: u32,
}

impl GraphInstance {
    pub fn new(vertices: u32, edges: Vec<(u32, u32)>, k: u32) -> Result<Self, ParseError> {
        if vertices > MAX_VERTICES {
            return Err(ParseError::unpositioned(format!(
                "graph has {vertices} vertices, at most {MAX_VERTICES} supported"
            )));
        }
        if k > vertices {
            return Err(ParseError::unpositioned(format!(
                "cover budget {k} exceeds vertex count {vertices}"
            )));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ParseError::unpositioned(format!("self-loop at vertex {u}")));
            }
            if u >= vertices || v >= vertices {
                return Err(ParseError::unpositioned(format!(
                    "edge ({u}, {v}) mentions a vertex outside 0..{vertices}"
                )));
            }
            let edge = (u.min(v), u.max(v));
            if !seen.insert(edge) {
                return Err(ParseError::unpositioned(format!(
                    "duplicate edge ({}, {})",
                    edge.0, edge.1
                )));
            }
            normalized.push(edge);
        }
        Ok(GraphInstance {
            vertices,
            edges: normalized,
            k,
        })
    }

    pub fn vertices(&self) -> u32 {
        self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Canonical instance encoding: a header `V E k` followed by one `u v`
    /// line per edge.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("{} {} {}\n", self.vertices, self.edges.len(), self.k);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out.into_bytes()
    }

    /// Parse the encoding written by [`GraphInstance::to_bytes`].
    pub fn from_bytes(raw: &[u8]) -> Result<Self, ParseError> {
        let text = std::str::from_utf8(raw)
            .map_err(|_| ParseError::unpositioned("instance is not valid UTF-8"))?;
        let mut lines = numbered_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::at(1, 1, "missing header line"))?;
        let fields = fields_with_cols(header);
        if fields.len() != 3 {
            return Err(ParseError::at(
                line_no,
                1,
                format!("header must be `V E k`, found {} fields", fields.len()),
            ));
        }
        let vertices = parse_u32(line_no, fields[0])?;
        let edge_count = parse_u32(line_no, fields[1])? as usize;
        let k = parse_u32(line_no, fields[2])?;
        let mut edges = Vec::with_capacity(edge_count);
        for (line_no, line) in lines {
            let fields = fields_with_cols(line);
            if fields.len() != 2 {
                return Err(ParseError::at(
                    line_no,
                    1,
                    format!("edge line must be `u v`, found {} fields", fields.len()),
                ));
            }
            edges.push((parse_u32(line_no, fields[0])?, parse_u32(line_no, fields[1])?));
        }
        if edges.len() != edge_count {
            return Err(ParseError::unpositioned(format!(
                "header promises {edge_count} edges, found {}",
                edges.len()
            )));
        }
        GraphInstance::new(vertices, edges, k)
    }

    /// Parse a plain edge-list file (header `V E`, then `u v` lines; blank
    /// lines and `#` comments are skipped), combining it with a cover
    /// budget supplied separately.
    pub fn parse_edge_list(text: &str, k: u32) -> Result<Self, ParseError> {
        let mut lines = numbered_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| ParseError::at(1, 1, "missing header line"))?;
        let fields = fields_with_cols(header);
        if fields.len() != 2 {
            return Err(ParseError::at(
                line_no,
                1,
                format!("header must be `V E`, found {} fields", fields.len()),
            ));
        }
        let vertices = parse_u32(line_no, fields[0])?;
        let edge_count = parse_u32(line_no, fields[1])? as usize;
        let mut edges = Vec::with_capacity(edge_count);
        for (line_no, line) in lines {
            let fields = fields_with_cols(line);
            if fields.len() != 2 {
                return Err(ParseError::at(
                    line_no,
                    1,
                    format!("edge line must be `u v`, found {} fields", fields.len()),
                ));
            }
            let u = parse_u32(line_no, fields[0])?;
            let v = parse_u32(line_no, fields[1])?;
            if u == v {
                return Err(ParseError::at(line_no, fields[0].0, "self-loop"));
            }
            if u >= vertices || v >= vertices {
                return Err(ParseError::at(
                    line_no,
                    fields[0].0,
                    format!("vertex outside 0..{vertices}"),
                ));
            }
            let edge = (u.min(v), u.max(v));
            if edges.contains(&edge) {
                return Err(ParseError::at(line_no, fields[0].0, "duplicate edge"));
            }
            edges.push(edge);
        }
        if edges.len() != edge_count {
            return Err(ParseError::unpositioned(format!(
                "header promises {edge_count} edges, found {}",
                edges.len()
            )));
        }
        GraphInstance::new(vertices, edges, k)
    }

    fn indicator(&self, mask: u128) -> Solution {
        let bytes: Vec<u8> = (0..self.vertices)
            .map(|v| if mask >> v & 1 == 1 { b'1' } else { b'0' })
            .collect();
        Solution::new(bytes)
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Whitespace-separated fields of a line with their 1-based start columns.
fn fields_with_cols(line: &str) -> Vec<(usize, &str)> {
    let mut fields = Vec::new();
    let mut rest = line;
    let mut offset = 0;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            return fields;
        }
        let end = trimmed
            .find(char::is_whitespace)
            .unwrap_or(trimmed.len());
        fields.push((offset + 1, &trimmed[..end]));
        offset += end;
        rest = &trimmed[end..];
    }
}

fn parse_u32(line: usize, field: (usize, &str)) -> Result<u32, ParseError> {
    field
        .1
        .parse()
        .map_err(|_| ParseError::at(line, field.0, format!("expected an integer, found {:?}", field.1)))
}

/// Descriptor over indicator strings: a candidate is accepted when it has
/// length `V`, uses only `0`/`1`, covers every edge, and selects at most `k`
/// vertices. The parameter is `k`.
pub fn descriptor() -> ProblemDescriptor {
    ProblemDescriptor::new(
        "vertex-cover",
        *b"01",
        |raw, candidate| {
            let Ok(g) = GraphInstance::from_bytes(raw) else {
                return false;
            };
            if candidate.len() != g.vertices as usize {
                return false;
            }
            if !candidate.iter().all(|&b| b == b'0' || b == b'1') {
                return false;
            }
            let chosen = candidate.iter().filter(|&&b| b == b'1').count();
            if chosen > g.k as usize {
                return false;
            }
            g.edges
                .iter()
                .all(|&(u, v)| candidate[u as usize] == b'1' || candidate[v as usize] == b'1')
        },
        |raw| {
            GraphInstance::from_bytes(raw)
                .map(|g| g.vertices as usize)
                .unwrap_or(0)
        },
        |raw| {
            GraphInstance::from_bytes(raw)
                .map(|g| g.k as u64)
                .unwrap_or(0)
        },
    )
}

/// Branching search over vertex subsets, one tick per explored node.
///
/// At each node the first uncovered edge is found; while strictly below the
/// size budget both endpoint extensions are explored. Nodes whose subset
/// covers everything emit it, and (again below budget) branch into all
/// one-vertex extensions. A visited set collapses converging branches;
/// re-popping a visited subset still costs its tick.
pub struct CoverSearch {
    instance: GraphInstance,
    stack: Vec<u128>,
    visited: HashSet<u128>,
    emitted: HashSet<u128>,
    finished: bool,
}

impl CoverSearch {
    pub fn new(instance: &GraphInstance) -> Self {
        CoverSearch {
            instance: instance.clone(),
            stack: vec![0],
            visited: HashSet::new(),
            emitted: HashSet::new(),
            finished: false,
        }
    }

    fn first_uncovered(&self, mask: u128) -> Option<(u32, u32)> {
        self.instance
            .edges
            .iter()
            .copied()
            .find(|&(u, v)| mask >> u & 1 == 0 && mask >> v & 1 == 0)
    }
}

impl EnumProcess for CoverSearch {
    fn run(&mut self, budget: u64) -> Result<Burst, EnumError> {
        if self.finished {
            return Ok(Burst {
                consumed: 0,
                emitted: None,
                finished: true,
            });
        }
        let mut consumed = 0;
        while consumed < budget {
            let Some(mask) = self.stack.pop() else {
                self.finished = true;
                return Ok(Burst {
                    consumed,
                    emitted: None,
                    finished: true,
                });
            };
            consumed += 1;
            if !self.visited.insert(mask) {
                // A pruned pop can still be the last node; the finish then
                // rides this tick so a budget of exactly the total cost
                // observes it.
                if self.stack.is_empty() {
                    self.finished = true;
                    return Ok(Burst {
                        consumed,
                        emitted: None,
                        finished: true,
                    });
                }
                continue;
            }
            let below_budget = mask.count_ones() < self.instance.k;
            match self.first_uncovered(mask) {
                Some((u, v)) => {
                    if below_budget {
                        self.stack.push(mask | 1 << v);
                        self.stack.push(mask | 1 << u);
                    }
                    if self.stack.is_empty() {
                        self.finished = true;
                        return Ok(Burst {
                            consumed,
                            emitted: None,
                            finished: true,
                        });
                    }
                }
                None => {
                    if below_budget {
                        for w in (0..self.instance.vertices).rev() {
                            if mask >> w & 1 == 0 {
                                self.stack.push(mask | 1 << w);
                            }
                        }
                    }
                    if self.emitted.insert(mask) {
                        self.finished = self.stack.is_empty();
                        return Ok(Burst {
                            consumed,
                            emitted: Some(self.instance.indicator(mask)),
                            finished: self.finished,
                        });
                    }
                }
            }
        }
        Ok(Burst::progress(consumed))
    }
}
