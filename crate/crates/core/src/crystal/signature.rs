//! The tensor-product signature rule: each factor contributes a run of minus
//! signs (its eps) followed by plus signs (its phi); cancelling adjacent
//! (+,-) pairs leaves the reduced word -^a +^b, and the Kashiwara operators
//! act on the factor holding the leftmost surviving + (lowering) or the
//! rightmost surviving - (raising).

use crate::crystal::element::Direction;

/// One tensor factor's contribution for a fixed color.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedFactor {
    pub minus: u32,
    pub plus: u32,
}

/// Factor contributions in reading order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SignedWord {
    pub factors: Vec<SignedFactor>,
}

impl SignedWord {
    pub fn new() -> SignedWord {
        SignedWord { factors: Vec::new() }
    }

    pub fn push(&mut self, minus: u32, plus: u32) {
        self.factors.push(SignedFactor { minus, plus });
    }
}

/// Surviving sign positions after cancellation, as factor indices. A factor
/// appears once per surviving sign it contributes.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReducedSignature {
    pub minus_positions: Vec<usize>,
    pub plus_positions: Vec<usize>,
}

impl ReducedSignature {
    pub fn eps(&self) -> i64 {
        self.minus_positions.len() as i64
    }

    pub fn phi(&self) -> i64 {
        self.plus_positions.len() as i64
    }
}

/// Single left-to-right stack pass: pluses are pushed, a minus pops the most
/// recent open plus. The fixed point equals repeated adjacent (+,-)
/// cancellation.
pub fn reduce_signature(word: &SignedWord) -> ReducedSignature {
    let mut open_plus: Vec<usize> = Vec::new();
    let mut minus = Vec::new();
    for (idx, f) in word.factors.iter().enumerate() {
        for _ in 0..f.minus {
            if open_plus.pop().is_none() {
                minus.push(idx);
            }
        }
        for _ in 0..f.plus {
            open_plus.push(idx);
        }
    }
    ReducedSignature { minus_positions: minus, plus_positions: open_plus }
}

/// Index of the factor acted on: lowering picks the leftmost surviving plus,
/// raising the rightmost surviving minus. `None` when the operator kills the
/// element.
pub fn tensor_apply(word: &SignedWord, dir: Direction) -> Option<usize> {
    let reduced = reduce_signature(word);
    match dir {
        Direction::Lower => reduced.plus_positions.first().copied(),
        Direction::Raise => reduced.minus_positions.last().copied(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(signs: &[(u32, u32)]) -> SignedWord {
        let mut w = SignedWord::new();
        for &(m, p) in signs {
            w.push(m, p);
        }
        w
    }

    #[test]
    fn paper_word_for_color_two() {
        // Restricted reading (3,3,2,2,3,2): signs (-,-,+,+,-,+),
        // one cancellation leaves --++ so eps = phi = 2.
        let w = word(&[(1, 0), (1, 0), (0, 1), (0, 1), (1, 0), (0, 1)]);
        let r = reduce_signature(&w);
        assert_eq!(r.minus_positions, vec![0, 1]);
        assert_eq!(r.plus_positions, vec![2, 5]);
        assert_eq!((r.eps(), r.phi()), (2, 2));
        assert_eq!(tensor_apply(&w, Direction::Lower), Some(2));
        assert_eq!(tensor_apply(&w, Direction::Raise), Some(1));
    }

    #[test]
    fn empty_and_single_cancellation() {
        let r = reduce_signature(&word(&[]));
        assert_eq!((r.eps(), r.phi()), (0, 0));
        let r = reduce_signature(&word(&[(0, 1), (1, 0)]));
        assert_eq!((r.eps(), r.phi()), (0, 0));
        assert_eq!(tensor_apply(&word(&[(0, 0), (0, 0)]), Direction::Lower), None);
        assert_eq!(tensor_apply(&word(&[(0, 0)]), Direction::Raise), None);
    }
}
