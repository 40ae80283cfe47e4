//! Local pixel topology shared by the rasterizers and the linter.

use std::collections::{BTreeMap, BTreeSet};

use crate::grid::Coord;

/// The two perpendicular orthogonal neighbours of `p` that are both in `set`,
/// if any pair exists. Such a pair makes `p` the corner of an L-triple.
pub fn l_corner_arms(set: &BTreeSet<Coord>, p: Coord) -> Vec<(Coord, Coord)> {
    let horiz = [p.offset(-1, 0), p.offset(1, 0)];
    let vert = [p.offset(0, -1), p.offset(0, 1)];
    let mut out = Vec::new();
    for h in horiz {
        if !set.contains(&h) {
            continue;
        }
        for v in vert {
            if set.contains(&v) {
                out.push((h, v));
            }
        }
    }
    out
}

pub fn has_l_corner(set: &BTreeSet<Coord>, p: Coord) -> bool {
    !l_corner_arms(set, p).is_empty()
}

/// Whether the 8-neighbours of `p` inside `set` form one 8-connected group
/// when `p` itself is ignored.
pub fn neighborhood_connected_without(set: &BTreeSet<Coord>, p: Coord) -> bool {
    let ring: Vec<Coord> = p.neighbors8().into_iter().filter(|q| set.contains(q)).collect();
    if ring.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; ring.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..ring.len() {
            if !seen[j] && ring[i].is_adjacent8(ring[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// A pixel `thin` may drop: unprotected, the corner of an L-triple, and
/// removable without splitting its neighbourhood.
pub fn is_removable_double(set: &BTreeSet<Coord>, protected: &BTreeSet<Coord>, p: Coord) -> bool {
    !protected.contains(&p) && has_l_corner(set, p) && neighborhood_connected_without(set, p)
}

/// Removes redundant "double" pixels until none is left, scanning row-major and
/// applying each removal immediately.
pub fn thin(pixels: &BTreeSet<Coord>, protected: &BTreeSet<Coord>) -> BTreeSet<Coord> {
    thin_with_log(pixels, protected).0
}

/// `thin`, also returning the removed pixels in removal order.
pub fn thin_with_log(pixels: &BTreeSet<Coord>, protected: &BTreeSet<Coord>) -> (BTreeSet<Coord>, Vec<Coord>) {
    let mut set = pixels.clone();
    let mut removed = Vec::new();
    loop {
        let before = removed.len();
        let order: Vec<Coord> = set.iter().copied().collect();
        for p in order {
            if is_removable_double(&set, protected, p) {
                set.remove(&p);
                removed.push(p);
            }
        }
        if removed.len() == before {
            return (set, removed);
        }
    }
}

/// Mixed adjacency: orthogonal neighbours always connect; diagonal neighbours
/// connect only when no shared orthogonal neighbour is in the set. This keeps
/// L-corners from producing spurious triangles in the adjacency graph.
pub fn m_neighbors(set: &BTreeSet<Coord>, p: Coord) -> Vec<Coord> {
    let mut out = Vec::with_capacity(4);
    for q in p.neighbors8() {
        if !set.contains(&q) {
            continue;
        }
        if p.is_adjacent4(q) {
            out.push(q);
        } else {
            let via_a = Coord::new(p.x, q.y);
            let via_b = Coord::new(q.x, p.y);
            if !set.contains(&via_a) && !set.contains(&via_b) {
                out.push(q);
            }
        }
    }
    out
}

pub fn m_degrees(set: &BTreeSet<Coord>) -> BTreeMap<Coord, usize> {
    set.iter().map(|&p| (p, m_neighbors(set, p).len())).collect()
}

/// 8-connected components, each sorted row-major, ordered by first pixel.
pub fn components8(set: &BTreeSet<Coord>) -> Vec<Vec<Coord>> {
    let mut seen: BTreeSet<Coord> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in set {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for q in p.neighbors8() {
                if set.contains(&q) && seen.insert(q) {
                    comp.push(q);
                    stack.push(q);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    Empty,
    /// Pixels fall into more than one connected piece; holds the pieces' pixel counts.
    Disconnected(Vec<usize>),
    /// Pixels with more than two path neighbours.
    Branching(Vec<Coord>),
    /// An open path needs exactly two ends; these are the ends found.
    Ends(Vec<Coord>),
}

/// Orders a pixel set as a simple path (open) or cycle (closed) under
/// mixed adjacency.
///
/// Open paths start at their row-major-first end. Cycles start at their
/// row-major-first pixel and head toward the neighbour with the larger `x`.
pub fn trace(set: &BTreeSet<Coord>, closed: bool) -> Result<Vec<Coord>, TraceError> {
    let first = *set.iter().next().ok_or(TraceError::Empty)?;
    let comps = components8(set);
    if comps.len() > 1 {
        return Err(TraceError::Disconnected(comps.iter().map(|c| c.len()).collect()));
    }
    if set.len() == 1 {
        return if closed { Err(TraceError::Ends(vec![first])) } else { Ok(vec![first]) };
    }
    let degrees = m_degrees(set);
    let branching: Vec<Coord> = degrees.iter().filter(|(_, &d)| d > 2).map(|(&p, _)| p).collect();
    if !branching.is_empty() {
        return Err(TraceError::Branching(branching));
    }
    let ends: Vec<Coord> = degrees.iter().filter(|(_, &d)| d < 2).map(|(&p, _)| p).collect();
    let start = if closed {
        if !ends.is_empty() {
            return Err(TraceError::Ends(ends));
        }
        first
    } else {
        if ends.len() != 2 {
            return Err(TraceError::Ends(ends));
        }
        ends[0]
    };
    let mut path = vec![start];
    let mut prev: Option<Coord> = None;
    let mut cur = start;
    loop {
        let mut nbrs = m_neighbors(set, cur);
        nbrs.retain(|&q| Some(q) != prev);
        if closed && prev.is_none() {
            nbrs.sort_by_key(|q| (-q.x, q.y));
        }
        let Some(&next) = nbrs.first() else { break };
        if next == start {
            break;
        }
        path.push(next);
        prev = Some(cur);
        cur = next;
        if path.len() > set.len() {
            break;
        }
    }
    if path.len() != set.len() {
        // degree-2 everywhere but more than one cycle cannot happen once connected;
        // a shortfall means the m-graph itself is split.
        return Err(TraceError::Disconnected(vec![path.len(), set.len() - path.len()]));
    }
    Ok(path)
}
