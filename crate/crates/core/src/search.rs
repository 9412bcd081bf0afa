//! Generic prioritized path search.
//!
//! One search routine serves the raw graph and all three set-graph
//! representations. The frontier discipline decides which queued vertex is
//! processed next; explored marking and the backtracking map are shared.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

/// Order in which queued vertices are processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchDiscipline {
    /// Breadth first.
    Fifo,
    /// Depth first.
    Lifo,
    /// Smallest weight first; ties go to the earliest enqueued.
    LightestFirst,
    /// Largest weight first; ties go to the earliest enqueued.
    HeaviestFirst,
}

enum Frontier<N> {
    Queue(VecDeque<N>),
    Stack(Vec<N>),
    Heap {
        heap: BinaryHeap<(i64, Reverse<u64>)>,
        slots: HashMap<u64, N>,
        seq: u64,
        heaviest: bool,
    },
}

impl<N: Copy> Frontier<N> {
    fn new(discipline: SearchDiscipline) -> Self {
        match discipline {
            SearchDiscipline::Fifo => Frontier::Queue(VecDeque::new()),
            SearchDiscipline::Lifo => Frontier::Stack(Vec::new()),
            SearchDiscipline::LightestFirst | SearchDiscipline::HeaviestFirst => Frontier::Heap {
                heap: BinaryHeap::new(),
                slots: HashMap::new(),
                seq: 0,
                heaviest: discipline == SearchDiscipline::HeaviestFirst,
            },
        }
    }

    fn push(&mut self, node: N, weight: usize) {
        match self {
            Frontier::Queue(q) => q.push_back(node),
            Frontier::Stack(s) => s.push(node),
            Frontier::Heap {
                heap,
                slots,
                seq,
                heaviest,
            } => {
                let w = weight as i64;
                heap.push((if *heaviest { w } else { -w }, Reverse(*seq)));
                slots.insert(*seq, node);
                *seq += 1;
            }
        }
    }

    fn pop(&mut self) -> Option<N> {
        match self {
            Frontier::Queue(q) => q.pop_front(),
            Frontier::Stack(s) => s.pop(),
            Frontier::Heap { heap, slots, .. } => {
                let (_, Reverse(id)) = heap.pop()?;
                slots.remove(&id)
            }
        }
    }
}

/// Result of a [`search`].
#[derive(Debug, Clone)]
pub struct SearchOutcome<N> {
    /// The first processed vertex satisfying the target predicate.
    pub found: Option<N>,
    /// Vertices in the order they were processed.
    pub processed: Vec<N>,
    back: HashMap<N, N>,
    start: N,
}

impl<N: Copy + Eq + Hash> SearchOutcome<N> {
    /// Path from the start vertex to `end`, reconstructed through the
    /// backtracking map. `None` if `end` was never reached.
    pub fn path_to(&self, end: N) -> Option<Vec<N>> {
        let mut path = vec![end];
        let mut cur = end;
        while cur != self.start {
            cur = *self.back.get(&cur)?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Path from the start vertex to the found target.
    pub fn path(&self) -> Option<Vec<N>> {
        self.found.and_then(|end| self.path_to(end))
    }

    /// The vertex through which `node` was reached.
    pub fn predecessor(&self, node: N) -> Option<N> {
        self.back.get(&node).copied()
    }
}

/// Searches outward from `start`.
///
/// Each processed vertex is tested against `target`; the search stops at the
/// first hit. Unexplored neighbours are marked explored and enqueued only when
/// they satisfy `keep`. `weight` is consulted by the weighted disciplines and
/// ignored otherwise.
pub fn search<N, I>(
    start: N,
    discipline: SearchDiscipline,
    weight: impl Fn(N) -> usize,
    mut neighbours: impl FnMut(N) -> I,
    mut keep: impl FnMut(N) -> bool,
    mut target: impl FnMut(N) -> bool,
) -> SearchOutcome<N>
where
    N: Copy + Eq + Hash,
    I: IntoIterator<Item = N>,
{
    let mut explored = HashSet::new();
    let mut back = HashMap::new();
    let mut frontier = Frontier::new(discipline);
    let mut processed = Vec::new();
    explored.insert(start);
    frontier.push(start, weight(start));
    while let Some(b) = frontier.pop() {
        processed.push(b);
        if target(b) {
            return SearchOutcome {
                found: Some(b),
                processed,
                back,
                start,
            };
        }
        for c in neighbours(b) {
            if explored.insert(c) && keep(c) {
                back.insert(c, b);
                frontier.push(c, weight(c));
            }
        }
    }
    SearchOutcome {
        found: None,
        processed,
        back,
        start,
    }
}

/// All vertices reachable from `start` through vertices satisfying `keep`
/// (the start itself is always included).
pub fn reachable<N, I>(start: N, neighbours: impl FnMut(N) -> I, keep: impl FnMut(N) -> bool) -> Vec<N>
where
    N: Copy + Eq + Hash,
    I: IntoIterator<Item = N>,
{
    search(start, SearchDiscipline::Fifo, |_| 0, neighbours, keep, |_| false).processed
}
