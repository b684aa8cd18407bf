//! Wire-graph tensor networks for Boolean states.
//!
//! A [`Network`] is a list of role-tagged nodes. Each node owns an ordered
//! list of wire labels; a label shared by two nodes is an edge, and a label
//! used by one node is an open (dangling) wire listed in [`Network::open_wires`].
//! Nodes are symbolic: tensors are materialized on demand, so the same
//! network can be contracted over exact integers or over reals.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::cnf::{BoolExpr, Formula};
use crate::tensor::{
    cap, contract, contract_shared, copy_tensor, gate_tensor, normalize_gate, CapKind, Scalar, Tensor,
    TensorError, TruthTable, WireId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("network is not a forest")]
    NotATree,
    #[error("node {0} is not a COPY node")]
    NotACopy(NodeId),
    #[error("network has {0} open wire(s); a closed network is required")]
    OpenWires(usize),
    #[error("open-wire signatures differ: {left} vs {right}")]
    SignatureMismatch { left: usize, right: usize },
    #[error("malformed network: {0}")]
    Malformed(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The Boolean function computed by a gate node. Inputs come first in the
/// node's wire list, the output wire last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GateFn {
    /// Disjunction with polarities folded in: input `i` contributes
    /// `x_i xor negated[i]`.
    Clause { negated: Vec<bool> },
    And(usize),
    Or(usize),
    Not,
}

impl GateFn {
    pub fn arity(&self) -> usize {
        match self {
            GateFn::Clause { negated } => negated.len(),
            GateFn::And(m) | GateFn::Or(m) => *m,
            GateFn::Not => 1,
        }
    }

    /// Evaluates the gate; `x` packs the inputs with input 0 as the MSB.
    pub fn eval(&self, x: usize) -> bool {
        let m = self.arity();
        let bit = |i: usize| (x >> (m - 1 - i)) & 1 == 1;
        match self {
            GateFn::Clause { negated } => (0..m).any(|i| bit(i) != negated[i]),
            GateFn::And(_) => (0..m).all(bit),
            GateFn::Or(_) => (0..m).any(bit),
            GateFn::Not => !bit(0),
        }
    }

    pub fn truth_table(&self) -> Result<TruthTable, TensorError> {
        TruthTable::from_fn(self.arity(), |x| self.eval(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Role {
    /// COPY node for a variable; wire 0 faces the variable cap.
    Copy { var: u32 },
    Gate(GateFn),
    /// The `|+>` that sums over a variable.
    VariableCap { var: u32 },
    Cap(CapKind),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Copy { var } => write!(f, "copy(x{var})"),
            Role::Gate(GateFn::Clause { negated }) => {
                let pol: String = negated.iter().map(|&n| if n { '-' } else { '+' }).collect();
                write!(f, "clause({pol})")
            }
            Role::Gate(GateFn::And(m)) => write!(f, "and{m}"),
            Role::Gate(GateFn::Or(m)) => write!(f, "or{m}"),
            Role::Gate(GateFn::Not) => write!(f, "not"),
            Role::VariableCap { var } => write!(f, "var(x{var})"),
            Role::Cap(CapKind::Zero) => write!(f, "cap(0)"),
            Role::Cap(CapKind::One) => write!(f, "cap(1)"),
            Role::Cap(CapKind::Plus) => write!(f, "cap(+)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub role: Role,
    pub wires: Vec<WireId>,
}

impl Node {
    /// The node's tensor over the exact/real scalar `S`, labelled by its wires.
    pub fn tensor<S: Scalar>(&self) -> Result<Tensor<S>, TensorError> {
        let t = match &self.role {
            Role::Copy { .. } => copy_tensor(self.wires.len() - 1),
            Role::Gate(g) => gate_tensor(&g.truth_table()?),
            Role::VariableCap { .. } => cap(CapKind::Plus),
            Role::Cap(kind) => cap(*kind),
        };
        t.relabel(&self.wires)
    }

    /// Like [`Node::tensor`] but with every gate replaced by its
    /// normalization.
    pub fn normalized_tensor(&self) -> Result<Tensor<f64>, TensorError> {
        match &self.role {
            Role::Gate(g) => normalize_gate(&gate_tensor::<BigUint>(&g.truth_table()?))?.relabel(&self.wires),
            _ => self.tensor(),
        }
    }

    pub fn degree(&self) -> usize {
        self.wires.len()
    }
}

/// Size parameters of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkStats {
    pub n: u32,
    pub m: usize,
    pub g: usize,
    pub c: usize,
    pub d: usize,
    pub branch_bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<Node>,
    open: Vec<WireId>,
    num_vars: u32,
    num_clauses: usize,
    next_wire: u32,
}

impl Network {
    fn empty(num_vars: u32, num_clauses: usize) -> Self {
        Network {
            nodes: Vec::new(),
            open: Vec::new(),
            num_vars,
            num_clauses,
            next_wire: 0,
        }
    }

    fn wire(&mut self) -> WireId {
        let w = WireId(self.next_wire);
        self.next_wire += 1;
        w
    }

    fn push(&mut self, role: Role, wires: Vec<WireId>) -> NodeId {
        self.nodes.push(Node { role, wires });
        NodeId(self.nodes.len() - 1)
    }

    // Variable side of the construction: a plus cap, fanned out by a COPY
    // node when the variable has several occurrences. Unused variables become
    // a closed <+|+> pair worth a factor of 2.
    fn attach_variable(&mut self, var: u32, occurrences: &[WireId]) {
        match occurrences {
            [] => {
                let w = self.wire();
                self.push(Role::VariableCap { var }, vec![w]);
                self.push(Role::Cap(CapKind::Plus), vec![w]);
            }
            [w] => {
                self.push(Role::VariableCap { var }, vec![*w]);
            }
            many => {
                let a = self.wire();
                self.push(Role::VariableCap { var }, vec![a]);
                let mut wires = Vec::with_capacity(many.len() + 1);
                wires.push(a);
                wires.extend_from_slice(many);
                self.push(Role::Copy { var }, wires);
            }
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn open_wires(&self) -> &[WireId] {
        &self.open
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// COPY nodes in id order (ascending variable for built networks).
    pub fn copy_nodes(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.role, Role::Copy { .. }))
            .map(|(i, _)| NodeId(i))
            .collect()
    }

    pub fn stats(&self) -> NetworkStats {
        let mut g = 0;
        let mut c = 0;
        let mut d = 0;
        for node in &self.nodes {
            match node.role {
                Role::Gate(_) => g += 1,
                Role::Copy { .. } => {
                    c += 1;
                    d = d.max(node.degree() - 1);
                }
                _ => {}
            }
        }
        NetworkStats {
            n: self.num_vars,
            m: self.num_clauses,
            g,
            c,
            d,
            branch_bound: BigUint::one() << c,
        }
    }

    // wire -> the nodes touching it
    fn endpoints(&self) -> HashMap<WireId, Vec<NodeId>> {
        let mut map: HashMap<WireId, Vec<NodeId>> = HashMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for w in &node.wires {
                map.entry(*w).or_default().push(NodeId(i));
            }
        }
        map
    }

    /// Neighbours of every node as `(wire, other node)`, `None` for open wires.
    fn adjacency(&self) -> Vec<Vec<(WireId, Option<NodeId>)>> {
        let ends = self.endpoints();
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                node.wires
                    .iter()
                    .map(|w| {
                        let other = ends[w].iter().copied().find(|&o| o.0 != i);
                        (*w, other)
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks the wiring and role invariants.
    pub fn check(&self) -> Result<(), NetworkError> {
        let ends = self.endpoints();
        for (w, nodes) in &ends {
            let open = self.open.contains(w);
            match (nodes.len(), open) {
                (2, false) | (1, true) => {}
                _ => {
                    return Err(NetworkError::Malformed(format!(
                        "wire {} has {} endpoint(s){}",
                        w.0,
                        nodes.len(),
                        if open { " and is listed open" } else { "" }
                    )))
                }
            }
        }
        if let Some(w) = self.open.iter().find(|w| !ends.contains_key(w)) {
            return Err(NetworkError::Malformed(format!("open wire {} has no node", w.0)));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let ok = match &node.role {
                Role::Copy { .. } => node.degree() >= 2,
                Role::Gate(g) => node.degree() == g.arity() + 1,
                Role::VariableCap { .. } | Role::Cap(_) => node.degree() == 1,
            };
            if !ok {
                return Err(NetworkError::Malformed(format!(
                    "node {i} ({}) has degree {}",
                    node.role,
                    node.degree()
                )));
            }
        }
        Ok(())
    }

    /// True iff the wire graph has no cycle (forests accepted).
    pub fn is_tree(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for nodes in self.endpoints().values() {
            if let [a, b] = nodes[..] {
                let (ra, rb) = (find(&mut parent, a.0), find(&mut parent, b.0));
                if ra == rb {
                    return false;
                }
                parent[ra] = rb;
            } else if nodes.len() > 2 {
                return false;
            }
        }
        true
    }

    /// Removes a COPY node, returning the two summands with `|0>` and `|1>`
    /// attached to every wire it touched. Ids of all other nodes are kept.
    pub fn branch_on_copy(&self, id: NodeId) -> Result<(Network, Network), NetworkError> {
        let mut zero = self.clone();
        zero.fix_copy(id, false)?;
        let mut one = self.clone();
        one.fix_copy(id, true)?;
        Ok((zero, one))
    }

    fn fix_copy(&mut self, id: NodeId, value: bool) -> Result<(), NetworkError> {
        let node = self.nodes.get(id.0).ok_or(NetworkError::NotACopy(id))?;
        if !matches!(node.role, Role::Copy { .. }) {
            return Err(NetworkError::NotACopy(id));
        }
        let kind = if value { CapKind::One } else { CapKind::Zero };
        let wires = std::mem::take(&mut self.nodes[id.0].wires);
        let mut rest = wires.into_iter();
        let first = rest.next().expect("COPY node has wires");
        self.nodes[id.0] = Node {
            role: Role::Cap(kind),
            wires: vec![first],
        };
        for w in rest {
            self.push(Role::Cap(kind), vec![w]);
        }
        Ok(())
    }

    /// Fixes every COPY node at once; `values[i]` goes to the i-th entry of
    /// [`Network::copy_nodes`]. The result has no COPY nodes.
    pub fn assign_copies(&self, values: &[bool]) -> Result<Network, NetworkError> {
        let copies = self.copy_nodes();
        if copies.len() != values.len() {
            return Err(NetworkError::Malformed(format!(
                "{} COPY node(s) but {} value(s)",
                copies.len(),
                values.len()
            )));
        }
        let mut out = self.clone();
        for (id, &v) in copies.iter().zip(values) {
            out.fix_copy(*id, v)?;
        }
        Ok(out)
    }

    /// Splits a closed network into the sub-networks induced by `left` and
    /// by its complement. Wires crossing the cut become the open wires of
    /// both halves, in ascending label order.
    pub fn split(&self, left: &[NodeId]) -> Result<(Network, Network), NetworkError> {
        if !self.open.is_empty() {
            return Err(NetworkError::OpenWires(self.open.len()));
        }
        let mut in_left = vec![false; self.nodes.len()];
        for id in left {
            in_left[id.0] = true;
        }
        let ends = self.endpoints();
        let mut crossing: Vec<WireId> = ends
            .iter()
            .filter(|(_, ns)| ns.len() == 2 && in_left[ns[0].0] != in_left[ns[1].0])
            .map(|(w, _)| *w)
            .collect();
        crossing.sort();
        let half = |side: bool| Network {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| in_left[*i] == side)
                .map(|(_, n)| n.clone())
                .collect(),
            open: crossing.clone(),
            num_vars: self.num_vars,
            num_clauses: self.num_clauses,
            next_wire: self.next_wire,
        };
        Ok((half(true), half(false)))
    }

    /// Joins the i-th open wire of `self` to the i-th open wire of `other`.
    pub fn glue(&self, other: &Network) -> Result<Network, NetworkError> {
        if self.open.len() != other.open.len() {
            return Err(NetworkError::SignatureMismatch {
                left: self.open.len(),
                right: other.open.len(),
            });
        }
        let offset = self.next_wire;
        let rename: HashMap<WireId, WireId> = other.open.iter().copied().zip(self.open.iter().copied()).collect();
        let mut out = self.clone();
        for node in &other.nodes {
            let wires = node
                .wires
                .iter()
                .map(|w| rename.get(w).copied().unwrap_or(WireId(w.0 + offset)))
                .collect();
            out.nodes.push(Node {
                role: node.role.clone(),
                wires,
            });
        }
        out.open.clear();
        out.next_wire = offset + other.next_wire;
        Ok(out)
    }

    /// Text adjacency list: one line per node with
    /// `id<TAB>role<TAB>degree<TAB>neighbours`, neighbours in wire order and
    /// `*` marking an open wire.
    pub fn dump(&self) -> String {
        let adj = self.adjacency();
        let mut s = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let nb: Vec<String> = adj[i]
                .iter()
                .map(|(_, o)| o.map_or("*".to_string(), |o| o.to_string()))
                .collect();
            let _ = writeln!(s, "{i}\t{}\t{}\t{}", node.role, node.degree(), nb.join(","));
        }
        s
    }
}

/// The Boolean-state network of a CNF formula.
///
/// Every clause becomes a clause gate whose output is fixed by `|1>`.
/// Variables occurring in several clauses are fanned out through a COPY node;
/// single-occurrence variables feed their clause directly. Fully contracted,
/// the network's value is the model count.
pub fn build_boolean_network(f: &Formula) -> Network {
    let mut net = Network::empty(f.num_vars(), f.num_clauses());
    let mut occurrences: Vec<Vec<WireId>> = vec![Vec::new(); f.num_vars() as usize];
    let mut clause_inputs = Vec::with_capacity(f.num_clauses());
    for clause in f.clauses() {
        let inputs: Vec<WireId> = clause
            .lits()
            .iter()
            .map(|l| {
                let w = net.wire();
                occurrences[l.var() as usize - 1].push(w);
                w
            })
            .collect();
        clause_inputs.push(inputs);
    }
    for (i, occ) in occurrences.iter().enumerate() {
        net.attach_variable(i as u32 + 1, occ);
    }
    for (clause, mut wires) in f.clauses().iter().zip(clause_inputs) {
        let out = net.wire();
        let negated = clause.lits().iter().map(|l| l.is_negated()).collect();
        wires.push(out);
        net.push(Role::Gate(GateFn::Clause { negated }), wires);
        net.push(Role::Cap(CapKind::One), vec![out]);
    }
    net
}

/// The network of an expression tree: one gate per AND/OR/NOT node, COPY
/// nodes for repeated variables, and `|1>` on the root output.
pub fn build_expr_network(e: &BoolExpr) -> Network {
    let n = e.num_vars();
    let mut net = Network::empty(n, 0);
    let mut occurrences: Vec<Vec<WireId>> = vec![Vec::new(); n as usize];
    let root = expr_wires(&mut net, e, &mut occurrences);
    net.push(Role::Cap(CapKind::One), vec![root]);
    for (i, occ) in occurrences.iter().enumerate() {
        net.attach_variable(i as u32 + 1, occ);
    }
    net
}

fn expr_wires(net: &mut Network, e: &BoolExpr, occ: &mut [Vec<WireId>]) -> WireId {
    let (gate, children): (GateFn, Vec<&BoolExpr>) = match e {
        BoolExpr::Var(v) => {
            let w = net.wire();
            occ[*v as usize - 1].push(w);
            return w;
        }
        BoolExpr::Not(c) => (GateFn::Not, vec![c]),
        BoolExpr::And(cs) => (GateFn::And(cs.len()), cs.iter().collect()),
        BoolExpr::Or(cs) => (GateFn::Or(cs.len()), cs.iter().collect()),
    };
    let mut wires: Vec<WireId> = children.into_iter().map(|c| expr_wires(net, c, occ)).collect();
    let out = net.wire();
    wires.push(out);
    net.push(Role::Gate(gate), wires);
    out
}

pub fn network_stats(net: &Network) -> NetworkStats {
    net.stats()
}

// Rooted traversal of one forest: nodes in preorder with parent links.
struct Rooted {
    order: Vec<NodeId>,
    parent_wire: Vec<Option<WireId>>,
    children: Vec<Vec<(WireId, NodeId)>>,
    roots: Vec<NodeId>,
}

fn root_forest(net: &Network, skip_as_root: impl Fn(&Node) -> bool) -> Result<Rooted, NetworkError> {
    if !net.is_tree() {
        return Err(NetworkError::NotATree);
    }
    let adj = net.adjacency();
    let len = net.nodes.len();
    let mut seen = vec![false; len];
    let mut order = Vec::with_capacity(len);
    let mut parent_wire = vec![None; len];
    let mut children = vec![Vec::new(); len];
    let mut roots = Vec::new();

    // prefer roots that are not leaves the caller wants to keep at the edge
    let candidates = (0..len)
        .filter(|&i| !skip_as_root(&net.nodes[i]))
        .chain((0..len).filter(|&i| skip_as_root(&net.nodes[i])));
    for start in candidates {
        if seen[start] {
            continue;
        }
        roots.push(NodeId(start));
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            order.push(NodeId(u));
            let mut kids: Vec<(WireId, NodeId)> = adj[u]
                .iter()
                .filter_map(|&(w, o)| o.filter(|o| !seen[o.0]).map(|o| (w, o)))
                .collect();
            kids.sort();
            for &(w, v) in &kids {
                seen[v.0] = true;
                parent_wire[v.0] = Some(w);
                stack.push(v.0);
            }
            children[u] = kids;
        }
    }
    Ok(Rooted {
        order,
        parent_wire,
        children,
        roots,
    })
}

/// Contracts a forest leaves-inward with the tensors supplied by `tensor_of`.
///
/// Each component is rooted at its lowest node id; a node absorbs its
/// children in ascending wire-label order, so an intermediate tensor never
/// has more wires than the node itself. Component values are multiplied.
pub fn contract_forest_with<S, F>(net: &Network, tensor_of: F) -> Result<S, NetworkError>
where
    S: Scalar,
    F: Fn(&Node) -> Result<Tensor<S>, TensorError>,
{
    if !net.open.is_empty() {
        return Err(NetworkError::OpenWires(net.open.len()));
    }
    let rooted = root_forest(net, |_| false)?;
    let mut done: Vec<Option<Tensor<S>>> = vec![None; net.nodes.len()];
    for &u in rooted.order.iter().rev() {
        let mut t = tensor_of(&net.nodes[u.0])?;
        for &(w, child) in &rooted.children[u.0] {
            let c = done[child.0].take().expect("children finish first");
            t = contract(&t, &c, &[(w, w)])?;
        }
        done[u.0] = Some(t);
    }
    let mut value = S::one();
    for r in rooted.roots {
        let t = done[r.0].take().expect("root contracted");
        value = value * t.into_value().expect("closed component contracts to a scalar");
    }
    Ok(value)
}

/// Exact value of a closed forest over the integers.
pub fn contract_forest(net: &Network) -> Result<BigUint, NetworkError> {
    contract_forest_with(net, |n| n.tensor::<BigUint>())
}

/// Contracts a forest against its own mirror image, i.e. `<psi|psi>` where
/// `psi` is the network with its variable caps removed.
///
/// Working leaves-inward, each subtree collapses to a 2x2 map on the wire
/// to its parent: variable wires start as the identity, and a gate with
/// children maps `M_i` yields `sum zeta[x,o] zeta[x',o'] prod M_i[x_i,x'_i]`.
/// With isometric gates every such map is the identity.
pub fn contract_norm_tree_with<S, F>(net: &Network, tensor_of: F) -> Result<S, NetworkError>
where
    S: Scalar,
    F: Fn(&Node) -> Result<Tensor<S>, TensorError>,
{
    if !net.open.is_empty() {
        return Err(NetworkError::OpenWires(net.open.len()));
    }
    let is_var = |n: &Node| matches!(n.role, Role::VariableCap { .. });
    let rooted = root_forest(net, is_var)?;
    let mirror_offset = net.next_wire;
    let mirror = |w: WireId| WireId(w.0 + mirror_offset);

    let mut done: Vec<Option<Tensor<S>>> = vec![None; net.nodes.len()];
    for &u in rooted.order.iter().rev() {
        let node = &net.nodes[u.0];
        if is_var(node) {
            let Some(p) = rooted.parent_wire[u.0] else {
                return Err(NetworkError::Malformed(format!("variable cap {u} is isolated")));
            };
            let id = copy_tensor::<S>(1).relabel(&[p, mirror(p)])?;
            done[u.0] = Some(id);
            continue;
        }
        let t = tensor_of(node)?;
        let mirrored: Vec<WireId> = t.wires().iter().map(|&w| mirror(w)).collect();
        let t_mirror = t.clone().relabel(&mirrored)?;
        let mut acc = t;
        for &(w, child) in &rooted.children[u.0] {
            let c = done[child.0].take().expect("children finish first");
            acc = contract(&acc, &c, &[(w, w)])?;
        }
        acc = contract_shared(&acc, &t_mirror)?;
        done[u.0] = Some(acc);
    }
    let mut value = S::one();
    for r in rooted.roots {
        let t = done[r.0].take().expect("root contracted");
        value = value * t.into_value().ok_or_else(|| NetworkError::Malformed("open component".into()))?;
    }
    Ok(value)
}

/// Contracts any network to a tensor over its open wires by greedy
/// pairwise contraction (smallest resulting rank first). Intended for the
/// small networks used in checks; the rank limit of [`crate::tensor`]
/// applies to every intermediate.
pub fn contract_general_with<S, F>(net: &Network, tensor_of: F) -> Result<Tensor<S>, NetworkError>
where
    S: Scalar,
    F: Fn(&Node) -> Result<Tensor<S>, TensorError>,
{
    let mut pool: Vec<Tensor<S>> = net.nodes.iter().map(&tensor_of).collect::<Result<_, _>>()?;
    if pool.is_empty() {
        return Ok(Tensor::scalar(S::one()));
    }
    while pool.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                let shared = pool[i].wires().iter().filter(|w| pool[j].wires().contains(w)).count();
                if shared == 0 {
                    continue;
                }
                let rank = pool[i].rank() + pool[j].rank() - 2 * shared;
                if best.is_none_or(|(r, _, _)| rank < r) {
                    best = Some((rank, i, j));
                }
            }
        }
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            None => {
                // disconnected: outer product of the two smallest
                let mut idx: Vec<usize> = (0..pool.len()).collect();
                idx.sort_by_key(|&k| (pool[k].rank(), k));
                (idx[0].min(idx[1]), idx[0].max(idx[1]))
            }
        };
        let b = pool.swap_remove(j);
        let a = pool.swap_remove(i);
        pool.push(contract_shared(&a, &b)?);
    }
    let t = pool.pop().unwrap();
    Ok(t.permuted(&net.open)?)
}

/// Exact integer value of a closed network of any shape.
pub fn contract_general(net: &Network) -> Result<BigUint, NetworkError> {
    if !net.open.is_empty() {
        return Err(NetworkError::OpenWires(net.open.len()));
    }
    Ok(contract_general_with(net, |n| n.tensor::<BigUint>())?
        .into_value()
        .expect("closed network"))
}

/// Exact value of a closed network: tree contraction when it is a forest,
/// greedy contraction otherwise.
pub fn network_value(net: &Network) -> Result<BigUint, NetworkError> {
    if net.is_tree() {
        contract_forest(net)
    } else {
        contract_general(net)
    }
}

/// `C{x, y}`: the value of `x` glued to `y` along their open wires.
pub fn inner_product(x: &Network, y: &Network) -> Result<BigUint, NetworkError> {
    network_value(&x.glue(y)?)
}

/// Variable index to the ids of its COPY node, if any.
pub fn copy_index(net: &Network) -> BTreeMap<u32, NodeId> {
    net.copy_nodes()
        .into_iter()
        .filter_map(|id| match net.node(id).role {
            Role::Copy { var } => Some((var, id)),
            _ => None,
        })
        .collect()
}
