//! Dense Boolean tensors: every wire has dimension 2.
//!
//! A tensor with wires `w_0 .. w_{r-1}` stores `2^r` entries; the bit of
//! wire `w_0` is the most significant bit of the flat index. Tensors are
//! generic over the scalar ring so the counting path runs on exact
//! [`BigUint`](num_bigint::BigUint) values while normalized gates use `f64`.
//! Mixing the two in one contraction does not type-check.

use std::collections::HashSet;
use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest rank a dense tensor may reach (`2^24` entries).
pub const MAX_RANK: usize = 24;

/// Label of a wire. Two tensors sharing a label are joined by that wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("wire {0:?} is not attached to the tensor")]
    MissingWire(WireId),
    #[error("wire {0:?} appears more than once")]
    DuplicateWire(WireId),
    #[error("truth table has {len} entries, expected a power of two")]
    BadTableLength { len: usize },
    #[error("data length {len} does not match rank {rank}")]
    BadDataLength { len: usize, rank: usize },
    #[error("tensor of rank {0} exceeds the dense limit of {MAX_RANK}")]
    TooLarge(usize),
    #[error("cannot normalize the constant-0 gate")]
    ConstantZero,
    #[error("tensor is not a Boolean gate")]
    NotAGate,
}

/// Scalar ring for tensor entries.
pub trait Scalar:
    Clone + Debug + PartialEq + Send + Sync + Zero + One + Add<Output = Self> + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + Send + Sync + Zero + One + Add<Output = T> + Mul<Output = T>
{
}

/// Truth table of `f: {0,1}^arity -> {0,1}`; `bits[x]` is `f(x)` with input 0
/// as the most significant bit of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(bits: Vec<bool>) -> Result<Self, TensorError> {
        let len = bits.len();
        if !len.is_power_of_two() {
            return Err(TensorError::BadTableLength { len });
        }
        let arity = len.trailing_zeros() as usize;
        if arity + 1 > MAX_RANK {
            return Err(TensorError::TooLarge(arity + 1));
        }
        Ok(TruthTable { arity, bits })
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self, TensorError> {
        if arity + 1 > MAX_RANK {
            return Err(TensorError::TooLarge(arity + 1));
        }
        TruthTable::new((0..1usize << arity).map(f).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, x: usize) -> bool {
        self.bits[x]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `(#f^-1(0), #f^-1(1))`.
    pub fn preimage_sizes(&self) -> (usize, usize) {
        let ones = self.bits.iter().filter(|&&b| b).count();
        (self.bits.len() - ones, ones)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    wires: Vec<WireId>,
    data: Vec<S>,
}

impl<S: Scalar> Tensor<S> {
    pub fn new(wires: Vec<WireId>, data: Vec<S>) -> Result<Self, TensorError> {
        check_unique(&wires)?;
        if wires.len() > MAX_RANK {
            return Err(TensorError::TooLarge(wires.len()));
        }
        if data.len() != 1usize << wires.len() {
            return Err(TensorError::BadDataLength {
                len: data.len(),
                rank: wires.len(),
            });
        }
        Ok(Tensor { wires, data })
    }

    /// Rank-0 tensor holding `value`.
    pub fn scalar(value: S) -> Self {
        Tensor {
            wires: Vec::new(),
            data: vec![value],
        }
    }

    fn from_fn(rank: usize, f: impl Fn(usize) -> S) -> Self {
        Tensor {
            wires: (0..rank as u32).map(WireId).collect(),
            data: (0..1usize << rank).map(f).collect(),
        }
    }

    pub fn wires(&self) -> &[WireId] {
        &self.wires
    }

    pub fn rank(&self) -> usize {
        self.wires.len()
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// The value of a rank-0 tensor.
    pub fn value(&self) -> Option<&S> {
        self.wires.is_empty().then(|| &self.data[0])
    }

    pub fn into_value(self) -> Option<S> {
        if self.wires.is_empty() {
            self.data.into_iter().next()
        } else {
            None
        }
    }

    /// Entry at the given bit per wire, in wire order.
    pub fn get(&self, bits: &[u8]) -> &S {
        assert_eq!(bits.len(), self.rank());
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        &self.data[idx]
    }

    /// Renames wires positionally.
    pub fn relabel(mut self, wires: &[WireId]) -> Result<Self, TensorError> {
        if wires.len() != self.rank() {
            return Err(TensorError::BadDataLength {
                len: self.data.len(),
                rank: wires.len(),
            });
        }
        check_unique(wires)?;
        self.wires = wires.to_vec();
        Ok(self)
    }

    /// Reorders the axes so that the wires appear in `order`.
    pub fn permuted(&self, order: &[WireId]) -> Result<Self, TensorError> {
        if order.len() != self.rank() {
            return Err(TensorError::BadDataLength {
                len: self.data.len(),
                rank: order.len(),
            });
        }
        check_unique(order)?;
        let r = self.rank();
        let src_pos: Vec<usize> = order
            .iter()
            .map(|w| self.position(*w).ok_or(TensorError::MissingWire(*w)))
            .collect::<Result<_, _>>()?;
        let data = (0..1usize << r)
            .map(|dst| {
                let mut src = 0usize;
                for (j, &p) in src_pos.iter().enumerate() {
                    let bit = (dst >> (r - 1 - j)) & 1;
                    src |= bit << (r - 1 - p);
                }
                self.data[src].clone()
            })
            .collect();
        Ok(Tensor {
            wires: order.to_vec(),
            data,
        })
    }

    pub fn position(&self, w: WireId) -> Option<usize> {
        self.wires.iter().position(|&x| x == w)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor {
            wires: self.wires.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, alpha: &S) -> Self {
        self.map(|x| alpha.clone() * x.clone())
    }

    /// Entrywise sum of two tensors with identical wire lists.
    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        let other = other.permuted(&self.wires)?;
        Ok(Tensor {
            wires: self.wires.clone(),
            data: self
                .data
                .iter()
                .zip(other.data)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        })
    }

    /// Equality up to wire order.
    pub fn same_as(&self, other: &Self) -> bool {
        match other.permuted(&self.wires) {
            Ok(o) => o.data == self.data,
            Err(_) => false,
        }
    }
}

fn check_unique(wires: &[WireId]) -> Result<(), TensorError> {
    let mut seen = HashSet::with_capacity(wires.len());
    for w in wires {
        if !seen.insert(*w) {
            return Err(TensorError::DuplicateWire(*w));
        }
    }
    Ok(())
}

/// The COPY tensor `|0><0|^k + |1><1|^k` on `k + 1` wires. Wire 0 is the
/// variable side; the tensor is symmetric so this is bookkeeping only.
///
/// Degree 0 gives the COPY unit `|+>`.
pub fn copy_tensor<S: Scalar>(k: usize) -> Tensor<S> {
    let all_ones = (1usize << (k + 1)) - 1;
    Tensor::from_fn(k + 1, |i| {
        if i == 0 || i == all_ones {
            S::one()
        } else {
            S::zero()
        }
    })
}

/// `sum_x |x><f(x)|`: wires `0..m` are the inputs, wire `m` the output.
pub fn gate_tensor<S: Scalar>(table: &TruthTable) -> Tensor<S> {
    let m = table.arity();
    Tensor::from_fn(m + 1, |i| {
        if table.get(i >> 1) == (i & 1 == 1) {
            S::one()
        } else {
            S::zero()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapKind {
    Zero,
    One,
    Plus,
}

/// Single-wire state `|0>`, `|1>` or `|+> = |0> + |1>`.
pub fn cap<S: Scalar>(kind: CapKind) -> Tensor<S> {
    let (a, b) = match kind {
        CapKind::Zero => (S::one(), S::zero()),
        CapKind::One => (S::zero(), S::one()),
        CapKind::Plus => (S::one(), S::one()),
    };
    Tensor {
        wires: vec![WireId(0)],
        data: vec![a, b],
    }
}

/// Contracts `a` and `b` over the listed wire pairs.
///
/// The result carries the remaining wires of `a` followed by those of `b`.
/// With no pairs this is the outer product.
pub fn contract<S: Scalar>(
    a: &Tensor<S>,
    b: &Tensor<S>,
    pairs: &[(WireId, WireId)],
) -> Result<Tensor<S>, TensorError> {
    let mut a_sum = Vec::with_capacity(pairs.len());
    let mut b_sum = Vec::with_capacity(pairs.len());
    for &(wa, wb) in pairs {
        a_sum.push(a.position(wa).ok_or(TensorError::MissingWire(wa))?);
        b_sum.push(b.position(wb).ok_or(TensorError::MissingWire(wb))?);
    }
    check_unique(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
    check_unique(&pairs.iter().map(|p| p.1).collect::<Vec<_>>())?;

    let a_keep: Vec<usize> = (0..a.rank()).filter(|p| !a_sum.contains(p)).collect();
    let b_keep: Vec<usize> = (0..b.rank()).filter(|p| !b_sum.contains(p)).collect();
    let wires: Vec<WireId> = a_keep
        .iter()
        .map(|&p| a.wires[p])
        .chain(b_keep.iter().map(|&p| b.wires[p]))
        .collect();
    check_unique(&wires)?;
    if wires.len() > MAX_RANK {
        return Err(TensorError::TooLarge(wires.len()));
    }

    let a_kept_off = offsets(a.rank(), &a_keep);
    let a_sum_off = offsets(a.rank(), &a_sum);
    let b_kept_off = offsets(b.rank(), &b_keep);
    let b_sum_off = offsets(b.rank(), &b_sum);
    let rb = b_keep.len();

    let mut data = Vec::with_capacity(1usize << wires.len());
    for ia in &a_kept_off {
        for ib in &b_kept_off {
            let mut acc = S::zero();
            for (sa, sb) in a_sum_off.iter().zip(&b_sum_off) {
                let x = &a.data[ia + sa];
                if x.is_zero() {
                    continue;
                }
                acc = acc + x.clone() * b.data[ib + sb].clone();
            }
            data.push(acc);
        }
    }
    debug_assert_eq!(data.len(), a_kept_off.len() << rb);
    Ok(Tensor { wires, data })
}

/// Contracts every wire label the two tensors share.
pub fn contract_shared<S: Scalar>(a: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
    let pairs: Vec<(WireId, WireId)> = a
        .wires
        .iter()
        .filter(|w| b.wires.contains(w))
        .map(|&w| (w, w))
        .collect();
    contract(a, b, &pairs)
}

// Flat-index offsets for every assignment to the wires at `positions`,
// enumerated with positions[0] as the most significant bit.
fn offsets(rank: usize, positions: &[usize]) -> Vec<usize> {
    let k = positions.len();
    (0..1usize << k)
        .map(|sub| {
            positions.iter().enumerate().fold(0usize, |acc, (j, &p)| {
                let bit = (sub >> (k - 1 - j)) & 1;
                acc | (bit << (rank - 1 - p))
            })
        })
        .collect()
}

/// `psi_f^dagger psi_f` for a gate tensor: a 2x2 tensor on (output, output')
/// whose diagonal holds the preimage sizes of 0 and 1.
pub fn diagonal_map<S: Scalar>(gate: &Tensor<S>) -> Result<Tensor<S>, TensorError> {
    let r = gate.rank();
    if r == 0 {
        return Err(TensorError::NotAGate);
    }
    let out = gate.wires[r - 1];
    let fresh = WireId(gate.wires.iter().map(|w| w.0).max().unwrap_or(0) + 1);
    let mut mirror_wires = gate.wires.clone();
    mirror_wires[r - 1] = fresh;
    let mirror = gate.clone().relabel(&mirror_wires)?;
    let pairs: Vec<(WireId, WireId)> = gate.wires[..r - 1].iter().map(|&w| (w, w)).collect();
    let d = contract(gate, &mirror, &pairs)?;
    debug_assert_eq!(d.wires, vec![out, fresh]);
    Ok(d)
}

/// Recovers the truth table of a gate tensor (last wire is the output).
pub fn gate_table(gate: &Tensor<BigUint>) -> Result<TruthTable, TensorError> {
    let r = gate.rank();
    if r == 0 {
        return Err(TensorError::NotAGate);
    }
    let one = BigUint::one();
    let mut bits = Vec::with_capacity(1 << (r - 1));
    for x in 0..1usize << (r - 1) {
        let (e0, e1) = (&gate.data[x << 1], &gate.data[x << 1 | 1]);
        match (e0.is_zero(), e1.is_zero()) {
            (false, true) if *e0 == one => bits.push(false),
            (true, false) if *e1 == one => bits.push(true),
            _ => return Err(TensorError::NotAGate),
        }
    }
    TruthTable::new(bits)
}

/// `zeta_f = sum_x |x><f(x)| / sqrt(#f^-1(f(x)))`.
///
/// For non-constant gates `zeta^dagger zeta` is the 2x2 identity. A
/// constant-1 gate has no output-0 rows, so only the (1,1) entry is one.
pub fn normalize_gate(gate: &Tensor<BigUint>) -> Result<Tensor<f64>, TensorError> {
    let table = gate_table(gate)?;
    let (zeros, ones) = table.preimage_sizes();
    if ones == 0 {
        return Err(TensorError::ConstantZero);
    }
    let w = [
        if zeros == 0 { 0.0 } else { 1.0 / (zeros as f64).sqrt() },
        1.0 / (ones as f64).sqrt(),
    ];
    let data = gate
        .data
        .iter()
        .enumerate()
        .map(|(i, e)| if e.is_zero() { 0.0 } else { w[i & 1] })
        .collect();
    Ok(Tensor {
        wires: gate.wires.clone(),
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    type Int = Tensor<BigUint>;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ints(t: &Int) -> Vec<u64> {
        t.data().iter().map(|x| x.to_u64().unwrap()).collect()
    }

    fn or2() -> TruthTable {
        TruthTable::new(vec![false, true, true, true]).unwrap()
    }

    #[test]
    fn copy_tensor_patterns() {
        let id: Int = copy_tensor(1);
        assert_eq!(ints(&id), vec![1, 0, 0, 1]);
        let c2: Int = copy_tensor(2);
        assert_eq!(ints(&c2), vec![1, 0, 0, 0, 0, 0, 0, 1]);
        let c3: Int = copy_tensor(3);
        assert_eq!(c3.data().len(), 16);
        assert_eq!(ints(&c3).iter().sum::<u64>(), 2);
    }

    #[test]
    fn gate_tensor_entries() {
        let or: Int = gate_tensor(&or2());
        assert_eq!(*or.get(&[0, 0, 0]), big(1));
        assert_eq!(*or.get(&[0, 0, 1]), big(0));
        for x in [[0u8, 1], [1, 0], [1, 1]] {
            assert_eq!(*or.get(&[x[0], x[1], 1]), big(1));
        }
        let not: Int = gate_tensor(&TruthTable::new(vec![true, false]).unwrap());
        assert_eq!(ints(&not), vec![0, 1, 1, 0]);
        let one: Int = gate_tensor(&TruthTable::new(vec![true]).unwrap());
        assert_eq!(ints(&one), vec![0, 1]);
        assert_eq!(
            TruthTable::new(vec![true; 3]).unwrap_err(),
            TensorError::BadTableLength { len: 3 }
        );
    }

    #[test]
    fn caps() {
        assert_eq!(ints(&cap(CapKind::Zero)), vec![1, 0]);
        assert_eq!(ints(&cap(CapKind::One)), vec![0, 1]);
        assert_eq!(ints(&cap(CapKind::Plus)), vec![1, 1]);
    }

    #[test]
    fn plus_on_copy2_is_identity() {
        let c: Int = copy_tensor(2);
        let p: Int = cap(CapKind::Plus);
        let r = contract(&c, &p, &[(WireId(0), WireId(0))]).unwrap();
        assert_eq!(r.wires(), &[WireId(1), WireId(2)]);
        assert_eq!(ints(&r), vec![1, 0, 0, 1]);
    }

    #[test]
    fn or_clause_counts_three() {
        let g: Int = gate_tensor(&or2());
        let t = contract(&g, &cap(CapKind::One), &[(WireId(2), WireId(0))]).unwrap();
        let t = contract(&t, &cap(CapKind::Plus), &[(WireId(0), WireId(0))]).unwrap();
        let t = contract(&t, &cap(CapKind::Plus), &[(WireId(1), WireId(0))]).unwrap();
        assert_eq!(t.into_value().unwrap(), big(3));
    }

    #[test]
    fn literal_and_its_negation_is_zero() {
        // psi = |01> + |10> against the Bell cap |00> + |11>
        let psi = Int::new(vec![WireId(0), WireId(1)], [0, 1, 1, 0].map(big).to_vec()).unwrap();
        let bell = Int::new(vec![WireId(0), WireId(1)], [1, 0, 0, 1].map(big).to_vec()).unwrap();
        let v = contract_shared(&psi, &bell).unwrap();
        assert_eq!(v.into_value().unwrap(), big(0));
    }

    #[test]
    fn contract_errors() {
        let a: Int = copy_tensor(1);
        let b: Int = cap(CapKind::Plus);
        assert_eq!(
            contract(&a, &b, &[(WireId(7), WireId(0))]).unwrap_err(),
            TensorError::MissingWire(WireId(7))
        );
        assert_eq!(
            contract(&a, &b, &[(WireId(0), WireId(0)), (WireId(1), WireId(0))]).unwrap_err(),
            TensorError::DuplicateWire(WireId(0))
        );
        // leftover labels collide
        assert_eq!(
            contract(&a, &a, &[]).unwrap_err(),
            TensorError::DuplicateWire(WireId(0))
        );
    }

    #[test]
    fn outer_product() {
        let a: Int = cap(CapKind::One);
        let b = cap::<BigUint>(CapKind::Plus).relabel(&[WireId(5)]).unwrap();
        let t = contract(&a, &b, &[]).unwrap();
        assert_eq!(t.wires(), &[WireId(0), WireId(5)]);
        assert_eq!(ints(&t), vec![0, 0, 1, 1]);
    }

    #[test]
    fn permutation_round_trip() {
        let t = Int::new(
            vec![WireId(0), WireId(1), WireId(2)],
            (0..8).map(big).collect(),
        )
        .unwrap();
        let p = t.permuted(&[WireId(2), WireId(0), WireId(1)]).unwrap();
        assert_eq!(p.get(&[1, 0, 0]), t.get(&[0, 0, 1]));
        assert_eq!(p.get(&[0, 1, 1]), t.get(&[1, 1, 0]));
        assert!(p.same_as(&t));
    }

    #[test]
    fn diagonal_maps() {
        let d = diagonal_map::<BigUint>(&gate_tensor(&or2())).unwrap();
        assert_eq!(ints(&d), vec![1, 0, 0, 3]);
        let not = TruthTable::new(vec![true, false]).unwrap();
        assert_eq!(ints(&diagonal_map::<BigUint>(&gate_tensor(&not)).unwrap()), vec![1, 0, 0, 1]);
        let const1 = TruthTable::new(vec![true; 4]).unwrap();
        assert_eq!(ints(&diagonal_map::<BigUint>(&gate_tensor(&const1)).unwrap()), vec![0, 0, 0, 4]);
    }

    fn zeta_dagger_zeta(z: &Tensor<f64>) -> Tensor<f64> {
        diagonal_map(z).unwrap()
    }

    #[test]
    fn normalized_gates_are_isometries() {
        let not = gate_tensor::<BigUint>(&TruthTable::new(vec![true, false]).unwrap());
        let z = normalize_gate(&not).unwrap();
        assert_eq!(z.data(), &[0.0, 1.0, 1.0, 0.0]);

        let z = normalize_gate(&gate_tensor(&or2())).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(z.data(), &[1.0, 0.0, 0.0, s, 0.0, s, 0.0, s]);
        let id = zeta_dagger_zeta(&z);
        for (got, want) in id.data().iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }

        let zero = gate_tensor::<BigUint>(&TruthTable::new(vec![false, false]).unwrap());
        assert_eq!(normalize_gate(&zero).unwrap_err(), TensorError::ConstantZero);
    }

    #[test]
    fn constant_one_normalizes_on_the_one_side() {
        let g = gate_tensor::<BigUint>(&TruthTable::new(vec![true; 4]).unwrap());
        let d = zeta_dagger_zeta(&normalize_gate(&g).unwrap());
        assert_eq!(d.data()[0], 0.0);
        assert!((d.data()[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_rejects_non_gates() {
        let t = Int::new(vec![WireId(0), WireId(1)], [1, 1, 0, 1].map(big).to_vec()).unwrap();
        assert_eq!(normalize_gate(&t).unwrap_err(), TensorError::NotAGate);
    }

    #[test]
    fn resolution_of_identity_small() {
        for k in 1..=6usize {
            let c: Int = copy_tensor(k);
            for wire in 0..=k as u32 {
                let r = contract(&c, &cap(CapKind::Plus), &[(WireId(wire), WireId(0))]).unwrap();
                let expected: Int = copy_tensor(k - 1);
                assert_eq!(r.data(), expected.data());
            }
        }
    }
}
