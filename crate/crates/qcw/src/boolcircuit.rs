//! Boolean circuit DAGs with deterministic and coin-flip gates, their
//! bitstring encoding, brute-force satisfiability, parity constructions, and
//! Solovay–Strassen primality.
//!
//! Circuits are single-output in this module; the oracle compiler handles
//! multi-output use by compiling an explicit list of output nodes.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{gcd, jacobi, powmod};

/// Inputs above this make the 2^n scan unreasonable on a desk.
const MAX_SAT_INPUTS: usize = 24;

/// One node of the circuit DAG. Predecessor indices always point at earlier
/// nodes, so the node list is a topological order by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// The i-th circuit input.
    Input(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
    /// Emits one uniformly-distributed random bit per evaluation.
    Coin,
}

impl NodeKind {
    pub(crate) fn predecessors(&self) -> Vec<usize> {
        match *self {
            NodeKind::Input(_) | NodeKind::Coin => vec![],
            NodeKind::Not(p) => vec![p],
            NodeKind::And(p, q) | NodeKind::Or(p, q) | NodeKind::Xor(p, q) => vec![p, q],
        }
    }

    fn label(&self) -> &'static str {
        match self {
            NodeKind::Input(_) => "input",
            NodeKind::Not(_) => "not",
            NodeKind::And(..) => "and",
            NodeKind::Or(..) => "or",
            NodeKind::Xor(..) => "xor",
            NodeKind::Coin => "coin",
        }
    }
}

/// A boolean circuit: `n` inputs, a topologically ordered node list, and a
/// designated output node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolCircuit {
    n: usize,
    nodes: Vec<NodeKind>,
    output: usize,
}

impl BoolCircuit {
    /// Validates arity, ordering, and input references. Binary gates must
    /// take two distinct predecessors (the adjacency-matrix encoding cannot
    /// express a doubled edge).
    pub fn new(n: usize, nodes: Vec<NodeKind>, output: usize) -> Result<Self> {
        if output >= nodes.len() {
            return Err(Error::InvalidInput(format!(
                "output node {output} out of range ({} nodes)",
                nodes.len()
            )));
        }
        let mut seen_inputs = vec![false; n];
        for (i, node) in nodes.iter().enumerate() {
            for p in node.predecessors() {
                if p >= i {
                    return Err(Error::InvalidInput(format!(
                        "node {i} references node {p}, which does not precede it"
                    )));
                }
            }
            if let NodeKind::And(p, q) | NodeKind::Or(p, q) | NodeKind::Xor(p, q) = *node {
                if p == q {
                    return Err(Error::InvalidInput(format!(
                        "node {i}: binary gate takes the same predecessor twice"
                    )));
                }
            }
            if let NodeKind::Input(idx) = *node {
                if idx >= n {
                    return Err(Error::InvalidInput(format!(
                        "node {i}: input index {idx} out of range for n={n}"
                    )));
                }
                if seen_inputs[idx] {
                    return Err(Error::InvalidInput(format!(
                        "input {idx} declared twice"
                    )));
                }
                seen_inputs[idx] = true;
            }
        }
        Ok(BoolCircuit { n, nodes, output })
    }

    pub fn num_inputs(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Number of gate nodes (everything that is not an input).
    pub fn gate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|k| !matches!(k, NodeKind::Input(_)))
            .count()
    }

    pub fn has_coin(&self) -> bool {
        self.nodes.iter().any(|k| matches!(k, NodeKind::Coin))
    }

    /// Gate-by-gate evaluation in topological order. `rng` is required iff
    /// the circuit contains coin-flip gates.
    pub fn evaluate(&self, x: &[bool], rng: Option<&mut dyn RngCore>) -> Result<bool> {
        Ok(self.evaluate_nodes(x, rng)?[self.output])
    }

    /// Values of every node; the oracle compiler reads gate outputs from
    /// here.
    pub fn evaluate_nodes(&self, x: &[bool], mut rng: Option<&mut dyn RngCore>) -> Result<Vec<bool>> {
        if x.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "input has {} bits, circuit expects {}",
                x.len(),
                self.n
            )));
        }
        let mut values: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                NodeKind::Input(i) => x[i],
                NodeKind::Not(p) => !values[p],
                NodeKind::And(p, q) => values[p] && values[q],
                NodeKind::Or(p, q) => values[p] || values[q],
                NodeKind::Xor(p, q) => values[p] ^ values[q],
                NodeKind::Coin => match rng {
                    Some(ref mut r) => r.next_u32() & 1 == 1,
                    None => {
                        return Err(Error::InvalidInput(
                            "circuit contains coin gates but no rng was supplied".into(),
                        ))
                    }
                },
            };
            values.push(v);
        }
        Ok(values)
    }

    /// Evaluation on the big-endian input index (bit 0 of the circuit input
    /// is the most significant bit of `assign`). Deterministic circuits only.
    pub fn evaluate_index(&self, assign: u64) -> Result<bool> {
        let x = index_to_input(assign, self.n);
        self.evaluate(&x, None)
    }
}

/// Unpacks a big-endian assignment index into input bits.
pub fn index_to_input(assign: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (assign >> (n - 1 - j)) & 1 == 1).collect()
}

/// Formats the assignment as a bitstring `x_0 x_1 … x_{n-1}`.
pub fn input_to_bits(assign: u64, n: usize) -> String {
    index_to_input(assign, n)
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect()
}

/// The five-gate parity circuit over {∧, ∨, ¬}:
/// `(¬x0 ∧ x1) ∨ (x0 ∧ ¬x1) = x0 ⊕ x1`.
pub fn parity_five_gate() -> BoolCircuit {
    let nodes = vec![
        NodeKind::Input(0),     // 0
        NodeKind::Input(1),     // 1
        NodeKind::Not(0),       // 2: ¬x0
        NodeKind::Not(1),       // 3: ¬x1
        NodeKind::And(2, 1),    // 4: ¬x0 ∧ x1
        NodeKind::And(0, 3),    // 5: x0 ∧ ¬x1
        NodeKind::Or(4, 5),     // 6
    ];
    BoolCircuit::new(2, nodes, 6).expect("fixed construction")
}

/// Balanced tree of n-1 XOR gates computing x_0 ⊕ … ⊕ x_{n-1}.
pub fn parity_xor_tree(n: usize) -> Result<BoolCircuit> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "xor tree needs at least two inputs, got {n}"
        )));
    }
    let mut nodes: Vec<NodeKind> = (0..n).map(NodeKind::Input).collect();
    let mut layer: Vec<usize> = (0..n).collect();
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            if let [p, q] = *pair {
                nodes.push(NodeKind::Xor(p, q));
                next.push(nodes.len() - 1);
            } else {
                next.push(pair[0]);
            }
        }
        layer = next;
    }
    let output = layer[0];
    BoolCircuit::new(n, nodes, output)
}

/// A boolean circuit's bitstring encoding: the adjacency matrix of the
/// (renumbered) node DAG followed by a 3-bit label per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitEncoding {
    bits: Vec<bool>,
}

const LABEL_AND: u8 = 0b000;
const LABEL_OR: u8 = 0b001;
const LABEL_NOT: u8 = 0b010;
const LABEL_XOR: u8 = 0b011;
const LABEL_COIN: u8 = 0b100;
const LABEL_INPUT: u8 = 0b101;

impl CircuitEncoding {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Hex rendering with an explicit bit-length prefix, e.g. `70:fa3…`.
    pub fn to_hex(&self) -> String {
        let mut out = format!("{}:", self.bits.len());
        for chunk in self.bits.chunks(4) {
            let mut nibble = 0u8;
            for (i, &b) in chunk.iter().enumerate() {
                if b {
                    nibble |= 1 << (3 - i);
                }
            }
            out.push(char::from_digit(u32::from(nibble), 16).expect("nibble"));
        }
        out
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let (len_part, hex_part) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse("encoding hex needs a `<bits>:` prefix".into()))?;
        let len: usize = len_part
            .parse()
            .map_err(|e| Error::Parse(format!("bad bit length: {e}")))?;
        if hex_part.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!(
                "hex body has {} digits, expected {} for {len} bits",
                hex_part.len(),
                len.div_ceil(4)
            )));
        }
        let mut bits = Vec::with_capacity(len);
        for ch in hex_part.chars() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))?;
            for i in 0..4 {
                bits.push(nibble >> (3 - i) & 1 == 1);
            }
        }
        bits.truncate(len);
        Ok(CircuitEncoding { bits })
    }
}

/// Encodes a circuit as adjacency matrix + labels over the canonical node
/// order: inputs x_0..x_{n-1} first, gates after in topological order with
/// the output gate last. The output is identified positionally, so it must
/// not feed any other gate.
pub fn encode(circuit: &BoolCircuit) -> Result<CircuitEncoding> {
    let order = canonical_order(circuit)?;
    let total = circuit.nodes.len();
    // position of each original node in the canonical order
    let mut pos = vec![0usize; total];
    for (new_idx, &old_idx) in order.iter().enumerate() {
        pos[old_idx] = new_idx;
    }
    let mut bits = vec![false; total * total];
    for &old_idx in &order {
        for p in circuit.nodes[old_idx].predecessors() {
            bits[pos[p] * total + pos[old_idx]] = true;
        }
    }
    for &old_idx in &order {
        let label = match circuit.nodes[old_idx] {
            NodeKind::And(..) => LABEL_AND,
            NodeKind::Or(..) => LABEL_OR,
            NodeKind::Not(_) => LABEL_NOT,
            NodeKind::Xor(..) => LABEL_XOR,
            NodeKind::Coin => LABEL_COIN,
            NodeKind::Input(_) => LABEL_INPUT,
        };
        for i in 0..3 {
            bits.push(label >> (2 - i) & 1 == 1);
        }
    }
    Ok(CircuitEncoding { bits })
}

fn canonical_order(circuit: &BoolCircuit) -> Result<Vec<usize>> {
    if matches!(circuit.nodes[circuit.output], NodeKind::Input(_)) {
        return Err(Error::InvalidInput(
            "cannot encode a circuit whose output is a bare input".into(),
        ));
    }
    let consumed_by_gate = {
        let mut used = vec![false; circuit.nodes.len()];
        for node in &circuit.nodes {
            for p in node.predecessors() {
                used[p] = true;
            }
        }
        used
    };
    if consumed_by_gate[circuit.output] {
        return Err(Error::InvalidInput(
            "cannot encode: the output node feeds another gate, so it cannot be placed last".into(),
        ));
    }
    // Inputs sorted by input index, then non-output gates in node order
    // (already topological), then the output.
    let mut inputs: Vec<(usize, usize)> = circuit
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, k)| match k {
            NodeKind::Input(idx) => Some((*idx, i)),
            _ => None,
        })
        .collect();
    inputs.sort_unstable();
    if inputs.len() != circuit.n {
        return Err(Error::InvalidInput(format!(
            "circuit declares n={} but has {} input nodes",
            circuit.n,
            inputs.len()
        )));
    }
    let mut order: Vec<usize> = inputs.into_iter().map(|(_, i)| i).collect();
    order.extend(
        circuit
            .nodes
            .iter()
            .enumerate()
            .filter(|(i, k)| !matches!(k, NodeKind::Input(_)) && *i != circuit.output)
            .map(|(i, _)| i),
    );
    order.push(circuit.output);
    Ok(order)
}

/// Decodes `e(C)` back into a circuit isomorphic to the encoded one.
pub fn decode(encoding: &CircuitEncoding) -> Result<BoolCircuit> {
    let len = encoding.bits.len();
    // len = M^2 + 3M for the node count M.
    let total = (0..=len)
        .find(|&m| m * m + 3 * m == len)
        .ok_or(Error::Decode {
            offset: len,
            message: "length is not M^2 + 3M for any node count M".into(),
        })?;
    if total == 0 {
        return Err(Error::Decode {
            offset: 0,
            message: "empty encoding".into(),
        });
    }
    let adj = &encoding.bits[..total * total];
    let labels = &encoding.bits[total * total..];
    let mut num_inputs = 0usize;
    let mut nodes = Vec::with_capacity(total);
    for node in 0..total {
        let base = total * total + 3 * node;
        let code = (u8::from(labels[3 * node]) << 2)
            | (u8::from(labels[3 * node + 1]) << 1)
            | u8::from(labels[3 * node + 2]);
        let preds: Vec<usize> = (0..total).filter(|&i| adj[i * total + node]).collect();
        // Reject forward edges: predecessors must precede their consumer.
        for i in node..total {
            if adj[i * total + node] {
                return Err(Error::Decode {
                    offset: i * total + node,
                    message: format!("edge {i} -> {node} violates topological order"),
                });
            }
        }
        let arity_err = |expected: usize| Error::Decode {
            offset: base,
            message: format!(
                "node {node} with label {code:03b} has {} predecessors, expected {expected}",
                preds.len()
            ),
        };
        let kind = match code {
            LABEL_AND => match preds[..] {
                [p, q] => NodeKind::And(p, q),
                _ => return Err(arity_err(2)),
            },
            LABEL_OR => match preds[..] {
                [p, q] => NodeKind::Or(p, q),
                _ => return Err(arity_err(2)),
            },
            LABEL_XOR => match preds[..] {
                [p, q] => NodeKind::Xor(p, q),
                _ => return Err(arity_err(2)),
            },
            LABEL_NOT => match preds[..] {
                [p] => NodeKind::Not(p),
                _ => return Err(arity_err(1)),
            },
            LABEL_COIN => match preds[..] {
                [] => NodeKind::Coin,
                _ => return Err(arity_err(0)),
            },
            LABEL_INPUT => match preds[..] {
                [] => {
                    let kind = NodeKind::Input(num_inputs);
                    num_inputs += 1;
                    kind
                }
                _ => return Err(arity_err(0)),
            },
            other => {
                return Err(Error::Decode {
                    offset: base,
                    message: format!("unknown node label {other:03b}"),
                })
            }
        };
        nodes.push(kind);
    }
    if matches!(nodes[total - 1], NodeKind::Input(_)) {
        return Err(Error::Decode {
            offset: total * total + 3 * (total - 1),
            message: "last node is an input; the output must be a gate".into(),
        });
    }
    BoolCircuit::new(num_inputs, nodes, total - 1).map_err(|e| Error::Decode {
        offset: 0,
        message: e.to_string(),
    })
}

/// Result of the exhaustive satisfiability scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// Lexicographically least satisfying assignment, as a big-endian index.
    pub witness: Option<u64>,
}

/// Tries all 2^n inputs in lexicographic order. Deterministic circuits only;
/// capped at 24 inputs.
pub fn brute_force_sat(circuit: &BoolCircuit) -> Result<SatResult> {
    if circuit.has_coin() {
        return Err(Error::InvalidInput(
            "satisfiability is defined for deterministic circuits; this one has coin gates".into(),
        ));
    }
    let n = circuit.n;
    if n > MAX_SAT_INPUTS {
        return Err(Error::ResourceLimit(format!(
            "brute-force SAT over {n} inputs exceeds the {MAX_SAT_INPUTS}-input cap"
        )));
    }
    for assign in 0..(1u64 << n) {
        if circuit.evaluate_index(assign)? {
            return Ok(SatResult {
                satisfiable: true,
                witness: Some(assign),
            });
        }
    }
    Ok(SatResult {
        satisfiable: false,
        witness: None,
    })
}

/// Verdict of the probabilistic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primality {
    /// Wrong with probability at most 2^-k.
    ProbablyPrime,
    /// Certain: an Euler witness was found.
    Composite,
}

/// Solovay–Strassen primality test with `k` independent Euler-witness rounds.
/// Composite verdicts are certain; probably-prime errs with probability at
/// most 2^-k.
pub fn solovay_strassen<R: Rng + ?Sized>(n: u64, k: u32, rng: &mut R) -> Result<Primality> {
    if n <= 2 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "solovay-strassen needs an odd integer > 2, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput("at least one round required".into()));
    }
    if n < 9 {
        // 3, 5, 7: no room to sample witnesses from [2, n-2].
        return Ok(Primality::ProbablyPrime);
    }
    for _ in 0..k {
        let a = rng.gen_range(2..n - 1);
        if gcd(a, n) != 1 {
            return Ok(Primality::Composite);
        }
        let j = jacobi(a, n);
        let euler = powmod(a, (n - 1) / 2, n);
        let j_mod_n = match j {
            1 => 1,
            -1 => n - 1,
            _ => return Ok(Primality::Composite),
        };
        if euler != j_mod_n {
            return Ok(Primality::Composite);
        }
    }
    Ok(Primality::ProbablyPrime)
}

/// Uniformly random deterministic circuit for exercising the SAT and oracle
/// compilation paths: `n` inputs, `gates` gate nodes over {∧, ∨, ¬, ⊕}.
pub fn random_circuit<R: Rng + ?Sized>(n: usize, gates: usize, rng: &mut R) -> BoolCircuit {
    assert!(n >= 2 && gates >= 1);
    let mut nodes: Vec<NodeKind> = (0..n).map(NodeKind::Input).collect();
    for _ in 0..gates {
        let avail = nodes.len();
        let kind = match rng.gen_range(0..4) {
            0 => NodeKind::Not(rng.gen_range(0..avail)),
            k => {
                let p = rng.gen_range(0..avail);
                let mut q = rng.gen_range(0..avail);
                while q == p {
                    q = rng.gen_range(0..avail);
                }
                match k {
                    1 => NodeKind::And(p, q),
                    2 => NodeKind::Or(p, q),
                    _ => NodeKind::Xor(p, q),
                }
            }
        };
        nodes.push(kind);
    }
    let output = nodes.len() - 1;
    BoolCircuit::new(n, nodes, output).expect("construction is valid by generation")
}

// --- JSON file format ---------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NodeJson {
    kind: String,
    #[serde(default)]
    args: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    nodes: Vec<NodeJson>,
    output: usize,
}

/// Parses the circuit JSON file format
/// `{n, nodes:[{kind, args:[...]}], output}`.
pub fn circuit_from_json(text: &str) -> Result<BoolCircuit> {
    let raw: CircuitJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("circuit json: {e}")))?;
    let mut nodes = Vec::with_capacity(raw.nodes.len());
    for (i, node) in raw.nodes.iter().enumerate() {
        let bad_arity = |expected: usize| {
            Error::Parse(format!(
                "node {i} ({}) has {} args, expected {expected}",
                node.kind,
                node.args.len()
            ))
        };
        let kind = match node.kind.as_str() {
            "input" => match node.args[..] {
                [idx] => NodeKind::Input(idx),
                _ => return Err(bad_arity(1)),
            },
            "not" => match node.args[..] {
                [p] => NodeKind::Not(p),
                _ => return Err(bad_arity(1)),
            },
            "and" => match node.args[..] {
                [p, q] => NodeKind::And(p, q),
                _ => return Err(bad_arity(2)),
            },
            "or" => match node.args[..] {
                [p, q] => NodeKind::Or(p, q),
                _ => return Err(bad_arity(2)),
            },
            "xor" => match node.args[..] {
                [p, q] => NodeKind::Xor(p, q),
                _ => return Err(bad_arity(2)),
            },
            "coin" => match node.args[..] {
                [] => NodeKind::Coin,
                _ => return Err(bad_arity(0)),
            },
            other => return Err(Error::Parse(format!("node {i}: unknown kind {other:?}"))),
        };
        nodes.push(kind);
    }
    BoolCircuit::new(raw.n, nodes, raw.output)
        .map_err(|e| Error::Parse(format!("circuit json: {e}")))
}

/// Renders a circuit in the JSON file format.
pub fn circuit_to_json(circuit: &BoolCircuit) -> String {
    let nodes = circuit
        .nodes
        .iter()
        .map(|k| NodeJson {
            kind: k.label().to_string(),
            args: match *k {
                NodeKind::Input(i) => vec![i],
                NodeKind::Not(p) => vec![p],
                NodeKind::And(p, q) | NodeKind::Or(p, q) | NodeKind::Xor(p, q) => vec![p, q],
                NodeKind::Coin => vec![],
            },
        })
        .collect();
    serde_json::to_string_pretty(&CircuitJson {
        n: circuit.n,
        nodes,
        output: circuit.output,
    })
    .expect("no non-serializable values")
}
