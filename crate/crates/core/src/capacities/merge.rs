//! Lazy sorted streams of lattice values.
//!
//! Both generators work on integer steps; callers scale rational inputs by a
//! common denominator first so that ties are detected exactly.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

/// Sorted values `m·x + n·y` for `m, n ≥ 0`, with multiplicity.
///
/// Row `n` is the progression `n·y, n·y + x, …`. Rows enter the heap only
/// when the previous row's first element is popped, so the heap holds one
/// entry per active row.
pub struct LatticeStream<T> {
    x: T,
    y: T,
    heap: BinaryHeap<Reverse<(T, bool)>>,
}

impl<T: Clone + Ord + Add<Output = T> + Default> LatticeStream<T> {
    pub fn new(x: T, y: T) -> Self {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((T::default(), true)));
        LatticeStream { x, y, heap }
    }
}

impl<T: Clone + Ord + Add<Output = T> + Default> Iterator for LatticeStream<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let Reverse((v, row_start)) = self.heap.pop()?;
        self.heap.push(Reverse((v.clone() + self.x.clone(), false)));
        if row_start {
            self.heap.push(Reverse((v.clone() + self.y.clone(), true)));
        }
        Some(v)
    }
}

/// Sorted union of the positive multiples of `x` and of `y`, with
/// multiplicity.
pub struct MultiplesStream<T> {
    x: T,
    y: T,
    next_x: T,
    next_y: T,
}

impl<T: Clone + Ord + Add<Output = T>> MultiplesStream<T> {
    pub fn new(x: T, y: T) -> Self {
        MultiplesStream {
            next_x: x.clone(),
            next_y: y.clone(),
            x,
            y,
        }
    }
}

impl<T: Clone + Ord + Add<Output = T>> Iterator for MultiplesStream<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if self.next_x <= self.next_y {
            let v = self.next_x.clone();
            self.next_x = v.clone() + self.x.clone();
            Some(v)
        } else {
            let v = self.next_y.clone();
            self.next_y = v.clone() + self.y.clone();
            Some(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_small() {
        let v: Vec<u64> = LatticeStream::new(1u64, 1).take(10).collect();
        assert_eq!(v, vec![0, 1, 1, 2, 2, 2, 3, 3, 3, 3]);
        let w: Vec<u64> = LatticeStream::new(3u64, 5).take(6).collect();
        assert_eq!(w, vec![0, 3, 5, 6, 8, 9]);
    }

    #[test]
    fn multiples_small() {
        let v: Vec<u64> = MultiplesStream::new(2u64, 3).take(7).collect();
        assert_eq!(v, vec![2, 3, 4, 6, 6, 8, 9]);
    }
}
