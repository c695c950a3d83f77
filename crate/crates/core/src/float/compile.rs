//! Halting programs for normalization, addition, multiplication and
//! piecewise polynomials over `S(p, q, β)`.

use super::{fp_add, fp_mul, FloatSystem, FloatValue, Piecewise, RawFormat, RawValue};
use crate::bnl::{BnlProgram, Machine};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::int::words::{self, const_digit, Digit, SWord, Word};
use crate::logic::{Net, Sig};
use std::collections::HashMap;
use std::fmt;

/// A float held in signals. Exponent and fraction digits are stored least
/// significant first.
#[derive(Clone, Debug)]
pub(crate) struct FloatSig {
    pub sys: FloatSystem,
    pub exp: SWord,
    pub negative: Sig,
    pub frac: Word,
}

fn input_digits(net: &mut Net, beta: u32, n: usize, name: &str) -> Vec<Digit> {
    let mut ds: Vec<Digit> = (1..=n).map(|i| (0..beta).map(|k| net.input(&format!("{name}{i}_{k}"))).collect()).collect();
    ds.reverse();
    ds
}

fn print_digits(out: &mut Vec<(String, Sig)>, w: &Word, name: &str) {
    for (i, d) in w.digits.iter().rev().enumerate() {
        for (k, f) in d.iter().enumerate() {
            out.push((format!("{name}{}_{k}", i + 1), f.clone()));
        }
    }
}

impl FloatSig {
    pub fn constant(v: &FloatValue) -> FloatSig {
        let sys = v.system();
        let e = v.exponent();
        FloatSig {
            sys,
            exp: SWord { positive: Formula::constant(e >= 0), word: Word::constant(e.unsigned_abs(), sys.beta, sys.q) },
            negative: Formula::constant(v.is_negative()),
            frac: Word::constant(v.mantissa() as u64, sys.beta, sys.p),
        }
    }

    /// Names of the encoding bits of a value called `name`, in order.
    pub fn encoding_names(sys: FloatSystem, name: &str) -> Vec<String> {
        let mut out = vec![format!("{name}_es"), format!("{name}_fs")];
        for (tag, n) in [("e", sys.q), ("f", sys.p)] {
            for i in 1..=n {
                out.extend((0..sys.beta).map(|k| format!("{name}_{tag}{i}_{k}")));
            }
        }
        out
    }

    /// Reassembles signals given in encoding order.
    pub fn from_bits(sys: FloatSystem, bits: &[Sig]) -> FloatSig {
        let b = sys.beta as usize;
        let digits = |from: usize, n: usize| -> Word {
            let mut ds: Vec<Digit> = (0..n).map(|i| bits[from + i * b..from + (i + 1) * b].to_vec()).collect();
            ds.reverse();
            Word::new(sys.beta, ds)
        };
        FloatSig {
            sys,
            exp: SWord { positive: bits[0].clone(), word: digits(2, sys.q) },
            negative: Formula::not_s(bits[1].clone()),
            frac: digits(2 + sys.q * b, sys.p),
        }
    }

    /// Input predicates in encoding order.
    pub fn input(net: &mut Net, sys: FloatSystem, name: &str) -> FloatSig {
        let bits: Vec<Sig> = Self::encoding_names(sys, name).iter().map(|n| net.input(n)).collect();
        Self::from_bits(sys, &bits)
    }

    /// Named signals in encoding order.
    pub fn bits(&self, name: &str) -> Vec<(String, Sig)> {
        let mut out = vec![
            (format!("{name}_es"), self.exp.positive.clone()),
            (format!("{name}_fs"), Formula::not_s(self.negative.clone())),
        ];
        print_digits(&mut out, &self.exp.word, &format!("{name}_e"));
        print_digits(&mut out, &self.frac, &format!("{name}_f"));
        out
    }

    pub fn latched(&self, net: &mut Net, name: &str) -> FloatSig {
        FloatSig {
            sys: self.sys,
            exp: SWord {
                positive: net.latch(&format!("{name}_es"), self.exp.positive.clone()),
                word: self.exp.word.latched(net, &format!("{name}_e")),
            },
            negative: net.latch(&format!("{name}_n"), self.negative.clone()),
            frac: self.frac.latched(net, &format!("{name}_f")),
        }
    }

    /// Multiplexer over exclusive, exhaustive conditions.
    pub fn select(cases: &[(Sig, &FloatSig)]) -> FloatSig {
        let bit = |f: &dyn Fn(&FloatSig) -> Sig| Formula::any(cases.iter().map(|(c, v)| Formula::and_s(c.clone(), f(v))));
        let exps: Vec<(Sig, &Word)> = cases.iter().map(|(c, v)| (c.clone(), &v.exp.word)).collect();
        let fracs: Vec<(Sig, &Word)> = cases.iter().map(|(c, v)| (c.clone(), &v.frac)).collect();
        let sys = cases[0].1.sys;
        FloatSig {
            sys,
            exp: SWord { positive: bit(&|v| v.exp.positive.clone()), word: words::select(&exps).resized(sys.q) },
            negative: bit(&|v| v.negative.clone()),
            frac: words::select(&fracs).resized(sys.p),
        }
    }
}

/// Rounds `m · β^{E − scale}` into `sys`, ties to even, with saturation and
/// flushing. The result is returned as formulas, valid four rounds after
/// `m` and `E`.
pub(crate) fn normalize_core(
    net: &mut Net,
    sys: FloatSystem,
    negative: Sig,
    m: &Word,
    e: &SWord,
    scale: usize,
    name: &str,
) -> FloatSig {
    let beta = sys.beta;
    let b = beta as usize;
    let (p, q) = (sys.p, sys.q);
    let n = m.len();
    // Digit `i` of `m` counted from the top, 1-based.
    let g = |i: usize| -> Digit {
        if (1..=n).contains(&i) {
            m.digit(n - i)
        } else {
            const_digit(0, beta)
        }
    };
    let lead: Vec<Sig> = (0..n)
        .map(|k| {
            let f = Formula::all((1..=k).map(|i| g(i)[0].clone()).chain([Formula::not_s(g(k + 1)[0].clone())]));
            net.latch(&format!("{name}_l{k}"), f)
        })
        .collect();
    let nonzero = Formula::any(lead.iter().cloned());
    let width = n.max(p + 1);
    let sd: Vec<Digit> = (1..=width)
        .map(|j| {
            let d: Digit =
                (0..b).map(|v| Formula::any((0..n).map(|k| Formula::and_s(lead[k].clone(), g(k + j)[v].clone())))).collect();
            net.latch_digit(&format!("{name}_h{j}"), d)
        })
        .collect();
    let tail = &sd[p..];
    let round = if b % 2 == 0 {
        let h = b / 2;
        let above = Formula::any((h + 1..b).map(|v| tail[0][v].clone()));
        let sticky = Formula::any(tail[1..].iter().map(|d| Formula::not_s(d[0].clone())));
        let odd = Formula::any((1..b).step_by(2).map(|v| sd[p - 1][v].clone()));
        Formula::or_s(above, Formula::and_s(tail[0][h].clone(), Formula::or_s(sticky, odd)))
    } else {
        let h = (b - 1) / 2;
        Formula::any((0..tail.len()).map(|j| {
            let above = Formula::any((h + 1..b).map(|v| tail[j][v].clone()));
            Formula::all(tail[..j].iter().map(|d| d[h].clone()).chain([above]))
        }))
    };
    // Carry into fraction digit `i` (least significant first); entry `p` is
    // the carry out of the fraction.
    let carry: Vec<Sig> = (0..=p)
        .map(|i| {
            let nines = (0..i).map(|j| sd[p - 1 - j][b - 1].clone());
            net.latch(&format!("{name}_r{i}"), Formula::all(std::iter::once(round.clone()).chain(nines)))
        })
        .collect();
    let ovf = carry[p].clone();
    let rounded: Vec<Digit> = (0..p)
        .map(|i| {
            let d = &sd[p - 1 - i];
            (0..b)
                .map(|v| {
                    let bumped = Formula::ite(carry[i].clone(), d[(v + b - 1) % b].clone(), d[v].clone());
                    let wrapped = Formula::constant(if i == p - 1 { v == 1 } else { v == 0 });
                    Formula::ite(ovf.clone(), wrapped, bumped)
                })
                .collect()
        })
        .collect();
    let c = n as i64 - scale as i64;
    let mut shifted = |extra: i64, tag: &str| -> SWord {
        let vals: Vec<i64> = (0..n).map(|k| c - k as i64 + extra).collect();
        let len = vals.iter().map(|v| words::digits_for(&v.unsigned_abs().into(), beta)).max().unwrap_or(1);
        let consts: Vec<Word> = vals.iter().map(|v| Word::constant(v.unsigned_abs(), beta, len)).collect();
        let cases: Vec<(Sig, &Word)> = lead.iter().cloned().zip(consts.iter()).collect();
        let delta = SWord {
            positive: Formula::any((0..n).filter(|&k| vals[k] >= 0).map(|k| lead[k].clone())),
            word: words::select(&cases),
        };
        words::signed_add(net, e, &delta, &format!("{name}_{tag}")).0
    };
    let e0 = shifted(0, "x0");
    let e1 = shifted(1, "x1");
    let exp = SWord {
        positive: Formula::ite(ovf.clone(), e1.positive.clone(), e0.positive.clone()),
        word: words::select(&[(Formula::not_s(ovf.clone()), &e0.word), (ovf.clone(), &e1.word)]),
    };
    let big = Formula::any((q..exp.word.len()).map(|i| Formula::not_s(exp.word.digit(i)[0].clone())));
    let over = Formula::and_s(exp.positive.clone(), big.clone());
    let zero = Formula::or_s(Formula::not_s(nonzero), Formula::and_s(Formula::not_s(exp.positive.clone()), big));
    let fixed = Formula::or_s(zero.clone(), over.clone());
    let top = |d: Digit| -> Digit {
        (0..b).map(|v| Formula::ite(fixed.clone(), Formula::constant(v == b - 1), d[v].clone())).collect()
    };
    let frac_digit = |d: &Digit| -> Digit {
        (0..b)
            .map(|v| {
                let forced = Formula::or_s(
                    Formula::and_s(zero.clone(), Formula::constant(v == 0)),
                    Formula::and_s(Formula::not_s(zero.clone()), Formula::constant(v == b - 1)),
                );
                Formula::ite(fixed.clone(), forced, d[v].clone())
            })
            .collect()
    };
    FloatSig {
        sys,
        exp: SWord {
            positive: Formula::and_s(Formula::not_s(zero.clone()), Formula::or_s(over, exp.positive.clone())),
            word: Word::new(beta, (0..q).map(|i| top(exp.word.digit(i))).collect()),
        },
        negative: Formula::and_s(Formula::not_s(zero.clone()), negative),
        frac: Word::new(beta, rounded.iter().map(frac_digit).collect()),
    }
}

/// `a ≥ b`, valid two rounds after the operands.
pub(crate) fn ge_sig(net: &mut Net, a: &FloatSig, b: &FloatSig, name: &str) -> Sig {
    let (egt, elt) = words::compare(net, &a.exp.word, &b.exp.word, &format!("{name}_e"));
    let (fgt, flt) = words::compare(net, &a.frac, &b.frac, &format!("{name}_f"));
    let (pa, pb) = (a.exp.positive.clone(), b.exp.positive.clone());
    let not = Formula::not_s;
    let both_zero = Formula::and_s(a.exp.word.is_zero(), b.exp.word.is_zero());
    let exp_gt = Formula::any([
        Formula::all([pa.clone(), not(pb.clone()), not(both_zero.clone())]),
        Formula::all([pa.clone(), pb.clone(), egt.clone()]),
        Formula::all([not(pa.clone()), not(pb.clone()), elt.clone()]),
    ]);
    let exp_lt = Formula::any([
        Formula::all([not(pa.clone()), pb.clone(), not(both_zero)]),
        Formula::all([pa.clone(), pb.clone(), elt]),
        Formula::all([not(pa), not(pb), egt]),
    ]);
    let exp_eq = Formula::and_s(not(exp_gt.clone()), not(exp_lt.clone()));
    let mag_gt = Formula::or_s(exp_gt, Formula::and_s(exp_eq.clone(), fgt));
    let mag_lt = Formula::or_s(exp_lt, Formula::and_s(exp_eq, flt));
    let (na, nb) = (a.negative.clone(), b.negative.clone());
    Formula::any([
        Formula::and_s(not(na.clone()), nb.clone()),
        Formula::all([not(na.clone()), not(nb.clone()), not(mag_lt)]),
        Formula::all([na, nb, not(mag_gt)]),
    ])
}

/// Rounded sum, latched.
pub(crate) fn add_sig(net: &mut Net, a: &FloatSig, b: &FloatSig, name: &str) -> FloatSig {
    let sys = a.sys;
    let (p, beta) = (sys.p, sys.beta);
    let (diff, _) = words::signed_add(net, &a.exp, &b.exp.negated(), &format!("{name}_d"));
    let a_big = diff.positive.clone();
    let b_big = Formula::not_s(a_big.clone());
    let shift: Vec<Sig> = (0..=p + 2)
        .map(|s| {
            let sw = Word::constant(s as u64, beta, words::digits_for(&(s as u64).into(), beta));
            let len = diff.word.len().max(sw.len());
            let eq = Formula::all((0..len).map(|i| {
                let k = sw.digit(i).iter().position(|f| f.is_top()).unwrap();
                diff.word.digit(i)[k].clone()
            }));
            net.latch(&format!("{name}_s{s}"), eq)
        })
        .collect();
    let early = Formula::not_s(Formula::any(shift.iter().cloned()));
    let big = FloatSig::select(&[(a_big.clone(), a), (b_big.clone(), b)]);
    let small = FloatSig::select(&[(b_big, a), (a_big, b)]);
    let aligned: Vec<Word> = (0..=p + 2).map(|s| big.frac.shifted(s)).collect();
    let cases: Vec<(Sig, &Word)> = shift.iter().cloned().zip(aligned.iter()).collect();
    let x = words::select(&cases).latched(net, &format!("{name}_x"));
    let big_signed = SWord { positive: Formula::not_s(big.negative.clone()), word: x };
    let small_signed = SWord { positive: Formula::not_s(small.negative.clone()), word: small.frac.clone() };
    let (sum, _) = words::signed_add(net, &big_signed, &small_signed, &format!("{name}_m"));
    let normal = normalize_core(net, sys, Formula::not_s(sum.positive), &sum.word, &small.exp, p, &format!("{name}_n"));
    FloatSig::select(&[(early.clone(), &big), (Formula::not_s(early), &normal)]).latched(net, &format!("{name}_z"))
}

/// Rounded product, latched.
pub(crate) fn mul_sig(net: &mut Net, a: &FloatSig, b: &FloatSig, name: &str) -> FloatSig {
    let sys = a.sys;
    let (e, _) = words::signed_add(net, &a.exp, &b.exp, &format!("{name}_e"));
    let (m, _) = words::mul(net, &a.frac, &b.frac, &format!("{name}_m"));
    let negative = Formula::not_s(Formula::iff(a.negative.clone(), b.negative.clone()));
    normalize_core(net, sys, negative, &m, &e, 2 * sys.p, &format!("{name}_n")).latched(net, &format!("{name}_z"))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Val {
    Const(FloatValue),
    Sig(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Arith {
    Add,
    Mul,
}

/// Shared intermediate results of a piecewise evaluation.
pub(crate) struct Evaluator<'a> {
    pub net: &'a mut Net,
    name: String,
    sigs: Vec<FloatSig>,
    memo: HashMap<(Arith, Val, Val), Val>,
}

impl<'a> Evaluator<'a> {
    pub fn new(net: &'a mut Net, name: &str) -> Self {
        Evaluator { net, name: name.to_string(), sigs: Vec::new(), memo: HashMap::new() }
    }

    pub fn leaf(&mut self, x: FloatSig) -> Val {
        self.sigs.push(x);
        Val::Sig(self.sigs.len() - 1)
    }

    pub fn sig(&self, v: &Val) -> FloatSig {
        match v {
            Val::Const(c) => FloatSig::constant(c),
            Val::Sig(i) => self.sigs[*i].clone(),
        }
    }

    pub fn combine(&mut self, op: Arith, a: &Val, b: &Val) -> Val {
        if let (Val::Const(x), Val::Const(y)) = (a, b) {
            let r = match op {
                Arith::Add => fp_add(x, y),
                Arith::Mul => fp_mul(x, y),
            };
            return Val::Const(r.expect("constants share the system"));
        }
        for (c, other) in [(a, b), (b, a)] {
            if let Val::Const(k) = c {
                match op {
                    Arith::Mul if k.is_zero() => return Val::Const(k.system().zero()),
                    Arith::Mul if *k == k.system().one() => return other.clone(),
                    Arith::Add if k.is_zero() => return other.clone(),
                    _ => {}
                }
            }
        }
        let key = (op, a.clone(), b.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (x, y) = (self.sig(a), self.sig(b));
        let tag = format!("{}_{}", self.name, self.sigs.len());
        let r = match op {
            Arith::Add => add_sig(self.net, &x, &y, &tag),
            Arith::Mul => mul_sig(self.net, &x, &y, &tag),
        };
        self.sigs.push(r);
        let v = Val::Sig(self.sigs.len() - 1);
        self.memo.insert(key, v.clone());
        v
    }

    pub fn pairwise(&mut self, op: Arith, mut items: Vec<Val>) -> Val {
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            for pair in items.chunks(2) {
                next.push(match pair {
                    [a, b] => self.combine(op, a, b),
                    [a] => a.clone(),
                    _ => unreachable!(),
                });
            }
            items = next;
        }
        items.pop().expect("nonempty")
    }
}

/// Piecewise polynomial, latched. Piece flags come from comparisons with
/// the breakpoints; each polynomial is evaluated in the canonical pairwise
/// order with shared subterms.
pub(crate) fn piecewise_sig(net: &mut Net, f: &Piecewise, x: &FloatSig, name: &str) -> FloatSig {
    let ge: Vec<Sig> = f
        .breakpoints()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let g = ge_sig(net, x, &FloatSig::constant(t), &format!("{name}_t{i}"));
            net.latch(&format!("{name}_g{i}"), g)
        })
        .collect();
    let flag = |i: usize| -> Sig {
        let lo = if i == 0 { Formula::top() } else { ge[i - 1].clone() };
        let hi = ge.get(i).cloned().unwrap_or_else(Formula::bot);
        Formula::and_s(lo, Formula::not_s(hi))
    };
    let mut ev = Evaluator::new(net, name);
    let xv = ev.leaf(x.clone());
    let values: Vec<Val> = f
        .pieces()
        .iter()
        .map(|coeffs| {
            let terms: Vec<Val> = (0..coeffs.len())
                .rev()
                .map(|i| {
                    let mut factors = vec![Val::Const(coeffs[i])];
                    factors.extend(std::iter::repeat_n(xv.clone(), i));
                    ev.pairwise(Arith::Mul, factors)
                })
                .collect();
            ev.pairwise(Arith::Add, terms)
        })
        .collect();
    let sigs: Vec<FloatSig> = values.iter().map(|v| ev.sig(v)).collect();
    let cases: Vec<(Sig, &FloatSig)> = sigs.iter().enumerate().map(|(i, s)| (flag(i), s)).collect();
    FloatSig::select(&cases).latched(net, &format!("{name}_z"))
}

/// Operation compiled by [`compile_fp_op`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FpOp {
    /// Raw value with widths `p′ = 2p + 1`, `q′ = q + 1` to `S(p, q, β)`.
    Normalize,
    Add,
    Mul,
    Piecewise(Piecewise),
}

impl fmt::Display for FpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FpOp::Normalize => "norm",
            FpOp::Add => "add",
            FpOp::Mul => "mul",
            FpOp::Piecewise(_) => "poly",
        })
    }
}

/// A compiled floating-point operation. Operands are encoded one after the
/// other; the print predicates hold the encoded result.
#[derive(Clone, Debug)]
pub struct CompiledFp {
    pub op: FpOp,
    pub system: FloatSystem,
    pub program: BnlProgram,
    pub output_round: u64,
}

pub fn compile_fp_op(op: FpOp, system: FloatSystem) -> Result<CompiledFp> {
    let sys = FloatSystem::new(system.p, system.q, system.beta)?;
    let mut net = Net::new();
    let out = match &op {
        FpOp::Normalize => {
            let raw = RawFormat::for_system(sys);
            let exp_pos = net.input("r_es");
            let frac_pos = net.input("r_fs");
            let ed = input_digits(&mut net, raw.beta, raw.q, "r_e");
            let fd = input_digits(&mut net, raw.beta, raw.p + 1, "r_f");
            let e = SWord { positive: exp_pos, word: Word::new(raw.beta, ed) };
            let m = Word::new(raw.beta, fd);
            normalize_core(&mut net, sys, Formula::not_s(frac_pos), &m, &e, raw.p, "nrm")
        }
        FpOp::Add | FpOp::Mul => {
            let a = FloatSig::input(&mut net, sys, "a");
            let b = FloatSig::input(&mut net, sys, "b");
            if op == FpOp::Add {
                add_sig(&mut net, &a, &b, "add")
            } else {
                mul_sig(&mut net, &a, &b, "mul")
            }
        }
        FpOp::Piecewise(f) => {
            if f.system() != sys {
                return Err(Error::InvalidSystem(format!("piece table is over {}, not {sys}", f.system())));
            }
            let x = FloatSig::input(&mut net, sys, "x");
            piecewise_sig(&mut net, f, &x, "pw")
        }
    };
    let (compiled, _) = net.finish(out.bits("z"))?;
    Ok(CompiledFp { op, system: sys, program: compiled.program, output_round: compiled.output_round })
}

impl CompiledFp {
    /// Widths of the raw operand of a normalization program.
    pub fn raw_format(&self) -> Option<RawFormat> {
        (self.op == FpOp::Normalize).then(|| RawFormat::for_system(self.system))
    }

    pub fn arity(&self) -> usize {
        match self.op {
            FpOp::Add | FpOp::Mul => 2,
            FpOp::Normalize | FpOp::Piecewise(_) => 1,
        }
    }

    /// Encodes the operands of an add, mul or piecewise program.
    pub fn input_bits(&self, args: &[FloatValue]) -> Result<Vec<bool>> {
        if self.op == FpOp::Normalize || args.len() != self.arity() {
            return Err(Error::Domain(format!("'{}' takes {} normalized operand(s)", self.op, self.arity())));
        }
        let mut bits = Vec::new();
        for a in args {
            if a.system() != self.system {
                return Err(Error::InvalidSystem(format!("operand is not in {}", self.system)));
            }
            bits.extend(self.system.encode(a));
        }
        Ok(bits)
    }

    pub fn raw_input_bits(&self, v: &RawValue) -> Result<Vec<bool>> {
        let raw = self.raw_format().ok_or_else(|| Error::Domain(format!("'{}' takes no raw operand", self.op)))?;
        raw.encode(v)
    }

    pub fn decode_output(&self, bits: &[bool]) -> Result<FloatValue> {
        self.system.decode(bits)
    }

    /// Runs encoded inputs in parallel and decodes the first output of each.
    pub fn run_encoded(&self, inputs: &[Vec<bool>]) -> Result<Vec<FloatValue>> {
        let machine = Machine::new(&self.program);
        let mut out = Vec::with_capacity(inputs.len());
        for chunk in inputs.chunks(64) {
            for seq in machine.outputs(chunk, self.output_round, Some(1))? {
                let e = seq.first().ok_or_else(|| Error::Domain("program produced no output".into()))?;
                out.push(self.decode_output(&e.value)?);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, args: &[FloatValue]) -> Result<FloatValue> {
        Ok(self.run_encoded(&[self.input_bits(args)?])?.remove(0))
    }

    pub fn evaluate_raw(&self, v: &RawValue) -> Result<FloatValue> {
        Ok(self.run_encoded(&[self.raw_input_bits(v)?])?.remove(0))
    }
}
