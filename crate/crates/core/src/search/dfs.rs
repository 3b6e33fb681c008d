//! Depth-first searches with weight-threshold pruning.

use crate::mesh::{MeshGraph, PruneRule, NO_UNIT};

/// Mutable state of one depth-first search. Each call owns its own engine,
/// so searches over a shared graph never interfere.
pub(crate) struct Engine<'g> {
    pub g: &'g MeshGraph,
    pub visited: Vec<bool>,
    pub path: Vec<u32>,
    pub expanded: u64,
    rule: PruneRule,
    threshold: i64,
    w_dummy: i64,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g MeshGraph, visited: Vec<bool>) -> Self {
        let s = g.scheme();
        Engine {
            g,
            visited,
            path: Vec::new(),
            expanded: 0,
            rule: g.prune_rule(),
            threshold: s.threshold,
            w_dummy: s.w_dummy,
        }
    }

    /// Whether stepping from the end of `path` to `next` at running weight
    /// `w` keeps the prefix physical.
    #[inline]
    pub fn allowed(&self, next: u32, w: i64) -> bool {
        match self.rule {
            PruneRule::Threshold => w < self.threshold,
            PruneRule::Structural => !self.closes_run(next),
        }
    }

    #[inline]
    fn closes_run(&self, next: u32) -> bool {
        let k = self.g.slot_at(next);
        let n = self.path.len();
        k != NO_UNIT && n >= 2 && self.g.slot_at(self.path[n - 1]) == k && self.g.slot_at(self.path[n - 2]) == k
    }

    /// Lower bound on the weight still needed to reach any port from the
    /// end of the current path.
    ///
    /// Dummy edges are negative, so the running weight alone is not a valid
    /// bound: a primary just entered still owes an internal edge and an exit.
    #[inline]
    pub fn remaining_bound(&self) -> i64 {
        let n = self.path.len();
        let cur = self.path[n - 1];
        if !self.g.is_primary_at(cur) {
            return 0;
        }
        let entered = n < 2 || self.g.slot_at(self.path[n - 2]) != self.g.slot_at(cur);
        if entered {
            self.g.entry_bound_at(cur)
        } else {
            self.w_dummy
        }
    }

    pub fn all_paths(&mut self, w: i64, target: u32, out: &mut Vec<(Vec<u32>, i64)>) {
        self.expanded += 1;
        let cur = *self.path.last().expect("nonempty");
        if cur == target {
            out.push((self.path.clone(), w));
            return;
        }
        self.visited[cur as usize] = true;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if self.visited[n as usize] || !self.allowed(n, nw) {
                continue;
            }
            self.path.push(n);
            self.all_paths(nw, target, out);
            self.path.pop();
        }
        self.visited[cur as usize] = false;
    }

    /// Branch and bound: keep the first path of the lowest weight found,
    /// which under sorted expansion is the lexicographically smallest.
    pub fn shortest(&mut self, w: i64, target: u32, best: &mut Option<(Vec<u32>, i64)>) {
        self.expanded += 1;
        if let Some((_, bw)) = best {
            if w + self.remaining_bound() >= *bw {
                return;
            }
        }
        let cur = *self.path.last().expect("nonempty");
        if cur == target {
            *best = Some((self.path.clone(), w));
            return;
        }
        self.visited[cur as usize] = true;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if self.visited[n as usize] || !self.allowed(n, nw) {
                continue;
            }
            self.path.push(n);
            self.shortest(nw, target, best);
            self.path.pop();
        }
        self.visited[cur as usize] = false;
    }

    /// First path (in expansion order) whose weight is exactly `want`.
    pub fn fixed(&mut self, w: i64, target: u32, want: i64) -> Option<Vec<u32>> {
        self.expanded += 1;
        if w + self.remaining_bound() > want {
            return None;
        }
        let cur = *self.path.last().expect("nonempty");
        if cur == target {
            return (w == want).then(|| self.path.clone());
        }
        self.visited[cur as usize] = true;
        let mut found = None;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if self.visited[n as usize] || !self.allowed(n, nw) {
                continue;
            }
            self.path.push(n);
            found = self.fixed(nw, target, want);
            self.path.pop();
            if found.is_some() {
                break;
            }
        }
        self.visited[cur as usize] = false;
        found
    }

    /// Every closed walk back to `parent` that stays physical.
    pub fn cycles(&mut self, w: i64, parent: u32, out: &mut Vec<(Vec<u32>, i64)>) {
        self.expanded += 1;
        let cur = *self.path.last().expect("nonempty");
        self.visited[cur as usize] = true;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if n == parent {
                if self.path.len() >= 3 && self.allowed(n, nw) {
                    let mut c = self.path.clone();
                    c.push(parent);
                    out.push((c, nw));
                }
            } else if !self.visited[n as usize] && self.allowed(n, nw) {
                self.path.push(n);
                self.cycles(nw, parent, out);
                self.path.pop();
            }
        }
        self.visited[cur as usize] = false;
    }

    pub fn shortest_cycle(&mut self, w: i64, parent: u32, best: &mut Option<(Vec<u32>, i64)>) {
        self.expanded += 1;
        if let Some((_, bw)) = best {
            if w + self.remaining_bound() >= *bw {
                return;
            }
        }
        let cur = *self.path.last().expect("nonempty");
        self.visited[cur as usize] = true;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if n == parent {
                let better = best.as_ref().map_or(true, |(_, bw)| nw < *bw);
                if self.path.len() >= 3 && self.allowed(n, nw) && better {
                    let mut c = self.path.clone();
                    c.push(parent);
                    *best = Some((c, nw));
                }
            } else if !self.visited[n as usize] && self.allowed(n, nw) {
                self.path.push(n);
                self.shortest_cycle(nw, parent, best);
                self.path.pop();
            }
        }
        self.visited[cur as usize] = false;
    }

    pub fn fixed_cycle(&mut self, w: i64, parent: u32, want: i64) -> Option<Vec<u32>> {
        self.expanded += 1;
        if w + self.remaining_bound() > want {
            return None;
        }
        let cur = *self.path.last().expect("nonempty");
        self.visited[cur as usize] = true;
        let mut found = None;
        for &(n, ew) in self.g.adj_at(cur) {
            let nw = w + ew;
            if n == parent {
                if self.path.len() >= 3 && nw == want && self.allowed(n, nw) {
                    let mut c = self.path.clone();
                    c.push(parent);
                    found = Some(c);
                }
            } else if !self.visited[n as usize] && self.allowed(n, nw) {
                self.path.push(n);
                found = self.fixed_cycle(nw, parent, want);
                self.path.pop();
            }
            if found.is_some() {
                break;
            }
        }
        self.visited[cur as usize] = false;
        found
    }
}
