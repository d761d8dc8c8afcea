//! Enumeration of the checks making up each suite.

use crate::error::Result;
use crate::fock::{FockVector, Monomial};
use crate::series::{jacobi_sides_voa, jacobi_sides_voc, ExponentWindow, Var};

use super::probe::{evaluate, Engine, InvarianceVariant, Probe};
use super::{Scope, Suite, VerificationConfig, Witness};

/// A unit of parallel work: one probe, or one whole Jacobi window.
#[derive(Clone, Debug)]
pub enum Task {
    Single(Probe),
    VoaJacobi {
        u: Monomial,
        v: Monomial,
        w: Monomial,
        window: [i64; 2],
    },
    VocJacobi {
        u: Monomial,
        probes: [Monomial; 3],
        window: [i64; 2],
    },
}

fn cube(window: [i64; 2]) -> Result<ExponentWindow> {
    ExponentWindow::cube(&[Var::X0, Var::X1, Var::X2], window[0], window[1])
}

fn cell_of(e: &crate::series::Exponents) -> [i64; 3] {
    [e[Var::X0.index()], e[Var::X1.index()], e[Var::X2.index()]]
}

impl Task {
    pub fn cost(&self) -> u64 {
        match self {
            Task::Single(_) => 1,
            Task::VoaJacobi { window, .. } | Task::VocJacobi { window, .. } => {
                let side = (window[1] - window[0] + 1) as u64;
                side * side * side
            }
        }
    }

    /// Returns the number of comparisons made and the first failure, if any.
    pub fn run(&self, engine: &Engine) -> Result<(u64, Option<Witness>)> {
        match self {
            Task::Single(probe) => {
                let (lhs, rhs) = evaluate(engine, probe)?;
                let witness = (lhs != rhs).then(|| Witness {
                    probe: probe.clone(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
                Ok((1, witness))
            }
            Task::VoaJacobi { u, v, w, window } => {
                let win = cube(*window)?;
                let sides = jacobi_sides_voa(
                    engine.voa(),
                    &FockVector::monomial(u.clone()),
                    &FockVector::monomial(v.clone()),
                    &FockVector::monomial(w.clone()),
                    &win,
                )?;
                let witness = sides.first_mismatch().map(|e| Witness {
                    probe: Probe::VoaJacobi {
                        u: u.clone(),
                        v: v.clone(),
                        w: w.clone(),
                        cell: cell_of(&e),
                        window: *window,
                    },
                    lhs: sides.lhs.coefficient(&e).unwrap_or_default().to_string(),
                    rhs: sides.rhs.coefficient(&e).unwrap_or_default().to_string(),
                });
                Ok((win.cells(), witness))
            }
            Task::VocJacobi { u, probes, window } => {
                let win = cube(*window)?;
                let [a, b, c] = probes.clone().map(FockVector::monomial);
                let sides = jacobi_sides_voc(
                    engine.voc(),
                    &FockVector::monomial(u.clone()),
                    [&a, &b, &c],
                    &win,
                )?;
                let witness = sides.first_mismatch().map(|e| Witness {
                    probe: Probe::VocJacobi {
                        u: u.clone(),
                        v1: probes[0].clone(),
                        v2: probes[1].clone(),
                        v3: probes[2].clone(),
                        cell: cell_of(&e),
                        window: *window,
                    },
                    lhs: sides.lhs.coefficient(&e).unwrap_or_default().to_string(),
                    rhs: sides.rhs.coefficient(&e).unwrap_or_default().to_string(),
                });
                Ok((win.cells(), witness))
            }
        }
    }
}

/// One report record's worth of work.
#[derive(Clone, Debug)]
pub struct Check {
    pub suite: Suite,
    pub axiom: &'static str,
    pub anchor: &'static str,
    pub domain: String,
    pub scope: Scope,
    pub diagnostic: bool,
    pub tasks: Vec<Task>,
}

struct Planner<'a> {
    config: &'a VerificationConfig,
    basis: Vec<Monomial>,
    out: Vec<Check>,
}

fn range([lo, hi]: [i64; 2]) -> std::ops::RangeInclusive<i64> {
    lo..=hi
}

fn wt(m: &Monomial) -> i64 {
    m.weight() as i64
}

impl Planner<'_> {
    fn basis_text(&self, names: &str) -> String {
        format!(
            "d={}; basis monomials {names} of weight <= {} ({} each)",
            self.config.rank,
            self.config.max_weight,
            self.basis.len()
        )
    }

    fn index_text(&self, name: &str, r: [i64; 2]) -> String {
        format!("{name} in [{}, {}]", r[0], r[1])
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        suite: Suite,
        axiom: &'static str,
        anchor: &'static str,
        domain: String,
        scope: Scope,
        tasks: Vec<Task>,
    ) {
        self.out.push(Check {
            suite,
            axiom,
            anchor,
            domain,
            scope,
            diagnostic: suite == Suite::Invariance,
            tasks,
        });
    }

    fn singles<F>(&self, mut f: F) -> Vec<Task>
    where
        F: FnMut(&Monomial, &mut Vec<Probe>),
    {
        let mut probes = Vec::new();
        for m in &self.basis {
            f(m, &mut probes);
        }
        probes.into_iter().map(Task::Single).collect()
    }

    fn pairs<F>(&self, mut f: F) -> Vec<Task>
    where
        F: FnMut(&Monomial, &Monomial, &mut Vec<Probe>),
    {
        let mut probes = Vec::new();
        for a in &self.basis {
            for b in &self.basis {
                f(a, b, &mut probes);
            }
        }
        probes.into_iter().map(Task::Single).collect()
    }

    fn triples(&self) -> Vec<(Monomial, Monomial, Monomial)> {
        let mut out = Vec::new();
        for a in &self.basis {
            for b in &self.basis {
                for c in &self.basis {
                    out.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
        out
    }

    fn window_text(&self) -> String {
        let [lo, hi] = self.config.window;
        format!("x0, x1, x2 exponents in [{lo}, {hi}]")
    }

    fn voa(&mut self) {
        let c = self.config;
        let s = Suite::Voa;
        let ks = c.index_range;
        let tasks = self.singles(|w, p| {
            for k in range(ks) {
                p.push(Probe::Unit { k, w: w.clone() });
            }
        });
        let domain = format!("{}; {}", self.basis_text("w"), self.index_text("k", ks));
        self.push(s, "unit", "Y(1,x)v = v", domain, Scope::Windowed, tasks);

        let order = c.creation_order;
        let tasks = self.singles(|v, p| {
            for m in 0..=order {
                p.push(Probe::Creation { v: v.clone(), m });
            }
            for k in 0..=ks[1].max(0) {
                p.push(Probe::CreationRegular { v: v.clone(), k });
            }
        });
        let domain = format!(
            "{}; m in [0, {order}] for v_(-m-1)1; k in [0, {}] for v_k 1 = 0",
            self.basis_text("v"),
            ks[1].max(0)
        );
        self.push(
            s,
            "creation",
            "Y(v,x)1 = e^{xL(-1)}v, lim_{x->0} Y(v,x)1 = v",
            domain,
            Scope::Windowed,
            tasks,
        );

        let tasks = self.pairs(|v, w, p| {
            let bound = wt(v) + wt(w);
            for k in bound..=bound + 2 {
                p.push(Probe::Truncation { v: v.clone(), k, w: w.clone() });
            }
        });
        let domain = format!(
            "{}; k in [wt v + wt w, wt v + wt w + 2]; larger k have negative target weight",
            self.basis_text("v, w")
        );
        self.push(
            s,
            "truncation",
            "v_k w = 0 for k > wt v + wt w - 1",
            domain,
            Scope::ExhaustiveByGrading,
            tasks,
        );

        let window = c.window;
        let tasks = self
            .triples()
            .into_iter()
            .map(|(u, v, w)| Task::VoaJacobi { u, v, w, window })
            .collect();
        let domain = format!("{}; {}", self.basis_text("u, v, w"), self.window_text());
        self.push(
            s,
            "jacobi",
            "x0^-1 d((x1-x2)/x0) Y(u,x1)Y(v,x2) - x0^-1 d((x2-x1)/(-x0)) Y(v,x2)Y(u,x1) = x2^-1 d((x1-x0)/x2) Y(Y(u,x0)v,x2)",
            domain,
            Scope::Windowed,
            tasks,
        );

        let vr = c.virasoro_range;
        let tasks = self.singles(|v, p| {
            for j in range(vr) {
                for k in range(vr) {
                    p.push(Probe::Bracket { j, k, v: v.clone(), coalgebra: false });
                }
            }
        });
        let domain = format!("{}; {}", self.basis_text("v"), self.index_text("j, k", vr));
        self.push(
            s,
            "virasoro",
            "[L(j),L(k)] = (j-k)L(j+k) + (j^3-j)/12 delta_{j,-k} d",
            domain,
            Scope::Windowed,
            tasks,
        );

        let tasks = self.singles(|v, p| p.push(Probe::WeightOperator { v: v.clone() }));
        let mut grading = tasks;
        grading.extend(self.pairs(|v, w, p| {
            for k in range(ks) {
                p.push(Probe::YGrading { v: v.clone(), k, w: w.clone() });
            }
        }));
        let domain = format!(
            "{}; L(0)v for each v; wt(v_k w) for {}",
            self.basis_text("v, w"),
            self.index_text("k", ks)
        );
        self.push(
            s,
            "grading",
            "L(0)v = (wt v)v, wt v_k w = wt v + wt w - k - 1",
            domain,
            Scope::Windowed,
            grading,
        );

        let tasks = self.pairs(|v, w, p| {
            for k in range(ks) {
                p.push(Probe::Derivative { v: v.clone(), k, w: w.clone() });
            }
        });
        let domain = format!("{}; {}", self.basis_text("v, w"), self.index_text("k", ks));
        self.push(
            s,
            "l(-1)-derivative",
            "d/dx Y(v,x) = Y(L(-1)v,x), i.e. (L(-1)v)_k = -k v_{k-1}",
            domain,
            Scope::Windowed,
            tasks,
        );
    }

    fn voc(&mut self) {
        let c = self.config;
        let s = Suite::Voc;
        let ks = c.index_range;
        let tasks = self.singles(|u, p| {
            for k in range(ks) {
                p.push(Probe::Counit { u: u.clone(), k });
            }
        });
        let domain = format!("{}; {}", self.basis_text("u"), self.index_text("k", ks));
        self.push(
            s,
            "counit",
            "(c (x) Id) Y^(x)u = u, i.e. (c (x) Id)Delta_k(u) = delta_{k,-1} u",
            domain,
            Scope::Windowed,
            tasks,
        );

        let order = c.creation_order;
        let basis = self.basis.clone();
        let tasks = self.singles(|u, p| {
            for m in 0..=order {
                p.push(Probe::Cocreation { u: u.clone(), m });
                for v in &basis {
                    p.push(Probe::CocreationPaired { u: u.clone(), m, v: v.clone() });
                }
            }
            for k in 0..=ks[1].max(0) {
                p.push(Probe::CocreationRegular { u: u.clone(), k });
            }
        });
        let domain = format!(
            "{}; m in [0, {order}] in operator form and paired with every basis v; k in [0, {}] for the regular part",
            self.basis_text("u, v"),
            ks[1].max(0)
        );
        self.push(
            s,
            "cocreation",
            "(Id (x) c)Delta_{-m-1}(u) = L(1)^m u/m!, paired: (u, L(-1)^m v)/m!; (Id (x) c)Delta_k(u) = 0 for k >= 0",
            domain,
            Scope::Windowed,
            tasks,
        );

        let tasks = self.singles(|u, p| {
            let bound = -wt(u) - 1;
            for k in bound - 4..bound {
                p.push(Probe::CoTruncation { u: u.clone(), k });
            }
        });
        let domain = format!(
            "{}; k in [-wt u - 5, -wt u - 2]; smaller k force a negative slot weight",
            self.basis_text("u")
        );
        self.push(
            s,
            "truncation",
            "Delta_k(u) = 0 for k < -wt u - 1",
            domain,
            Scope::ExhaustiveByGrading,
            tasks,
        );

        let window = c.window;
        let mut tasks = Vec::new();
        for u in &self.basis {
            for (a, b, cc) in self.triples() {
                // Pairings vanish unless the probe weights can meet wt u.
                tasks.push(Task::VocJacobi {
                    u: u.clone(),
                    probes: [a, b, cc],
                    window,
                });
            }
        }
        let domain = format!(
            "{}; paired with every probe v1 (x) v2 (x) v3 from the same basis; {}",
            self.basis_text("u"),
            self.window_text()
        );
        self.push(
            s,
            "jacobi",
            "x0^-1 d((x1-x2)/x0)(Id (x) Y^(x2))Y^(x1) - x0^-1 d((x2-x1)/(-x0))(T (x) Id)(Id (x) Y^(x1))Y^(x2) = x2^-1 d((x1-x0)/x2)(Y^(x0) (x) Id)Y^(x2)",
            domain,
            Scope::Windowed,
            tasks,
        );

        let vr = c.virasoro_range;
        let tasks = self.singles(|u, p| {
            for j in range(vr) {
                p.push(Probe::CoVirasoro { j, u: u.clone() });
                for k in range(vr) {
                    p.push(Probe::Bracket { j, k, v: u.clone(), coalgebra: true });
                }
            }
        });
        let domain = format!("{}; {}", self.basis_text("u"), self.index_text("j, k", vr));
        self.push(
            s,
            "virasoro",
            "(rho (x) Id)Y^(x) = sum L(k) x^{k-2}, with the Virasoro bracket of central charge d",
            domain,
            Scope::Windowed,
            tasks,
        );

        let mut tasks = self.singles(|u, p| {
            p.push(Probe::CoVirasoro { j: 0, u: u.clone() });
            p.push(Probe::WeightOperator { v: u.clone() });
        });
        tasks.extend(self.singles(|u, p| {
            for k in range(ks) {
                p.push(Probe::CoGrading { u: u.clone(), k });
            }
        }));
        let domain = format!(
            "{}; L(0)u for each u; slot weights of Delta_k(u) for {}",
            self.basis_text("u"),
            self.index_text("k", ks)
        );
        self.push(
            s,
            "grading",
            "L(0)u = (wt u)u, Delta_k(u) in sum_{s+t = wt u + k + 1} V_(s) (x) V_(t)",
            domain,
            Scope::Windowed,
            tasks,
        );

        let tasks = self.singles(|u, p| {
            for k in range(ks) {
                p.push(Probe::CoDerivative { u: u.clone(), k });
            }
        });
        let domain = format!("{}; {}", self.basis_text("u"), self.index_text("k", ks));
        self.push(
            s,
            "l(1)-derivative",
            "d/dx Y^(x) = (L(1) (x) Id)Y^(x), i.e. (L(1) (x) Id)Delta_k = -k Delta_{k-1}",
            domain,
            Scope::Windowed,
            tasks,
        );
    }

    fn adjoint(&mut self) {
        let mut probes = Vec::new();
        for u in &self.basis {
            for v in &self.basis {
                for w in &self.basis {
                    // Only k = wt v + wt w - wt u - 1 can pair nontrivially; its neighbours
                    // confirm both sides vanish off the grading.
                    let forced = wt(v) + wt(w) - wt(u) - 1;
                    for k in forced - 1..=forced + 1 {
                        probes.push(Probe::Adjunction {
                            u: u.clone(),
                            k,
                            v: v.clone(),
                            w: w.clone(),
                        });
                    }
                }
            }
        }
        let mut tasks: Vec<Task> = probes.into_iter().map(Task::Single).collect();
        let domain = format!(
            "{}; k in [f - 1, f + 1] with f = wt v + wt w - wt u - 1",
            self.basis_text("u, v, w")
        );
        tasks.extend(self.singles(|u, p| {
            let top = (2 * wt(u)).max(1);
            for k in -wt(u) - 1..=top {
                p.push(Probe::CoGrading { u: u.clone(), k });
            }
        }));
        self.push(
            Suite::Adjoint,
            "adjunction",
            "(Y^(x)u, v (x) w) = (u, Y(v,x)w)",
            domain + "; plus slot weights of Delta_k(u) for k in [-wt u - 1, max(2 wt u, 1)]",
            Scope::ExhaustiveByGrading,
            tasks,
        );
    }

    fn virasoro(&mut self) {
        let vr = self.config.virasoro_range;
        let s = Suite::Virasoro;
        let tasks = self.singles(|v, p| {
            for j in range(vr) {
                for k in range(vr) {
                    p.push(Probe::Bracket { j, k, v: v.clone(), coalgebra: false });
                }
            }
        });
        let domain = format!("{}; {}", self.basis_text("v"), self.index_text("j, k", vr));
        self.push(
            s,
            "bracket",
            "[L(j),L(k)] = (j-k)L(j+k) + (j^3-j)/12 delta_{j,-k} d",
            domain,
            Scope::Windowed,
            tasks,
        );
        let tasks = self.singles(|v, p| {
            for k in range(vr) {
                p.push(Probe::OmegaModes { k, v: v.clone() });
            }
        });
        let domain = format!("{}; {}", self.basis_text("v"), self.index_text("k", vr));
        self.push(
            s,
            "omega-modes",
            "Y(omega,x) = sum L(k) x^{-k-2}",
            domain,
            Scope::Windowed,
            tasks,
        );
        let tasks = self.singles(|u, p| {
            for j in range(vr) {
                p.push(Probe::CoVirasoro { j, u: u.clone() });
            }
        });
        let domain = format!("{}; {}", self.basis_text("u"), self.index_text("j", vr));
        self.push(
            s,
            "co-virasoro",
            "(rho (x) Id)Y^(x)u = sum L(j)u x^{j-2}",
            domain,
            Scope::Windowed,
            tasks,
        );
    }

    fn preserving(&mut self) {
        let [lo, hi] = self.config.virasoro_range;
        let r = lo.abs().max(hi.abs());
        let s = Suite::Preserving;
        let tasks = self.pairs(|u, v, p| {
            for k in -r..=r {
                p.push(Probe::Preserving { k, u: u.clone(), v: v.clone() });
            }
        });
        let domain = format!("{}; |k| <= {r}", self.basis_text("u, v"));
        self.push(
            s,
            "virasoro-preserving",
            "(L(k)u, v) = (u, L(-k)v)",
            domain,
            Scope::Windowed,
            tasks,
        );
        let tasks = self.pairs(|u, v, p| {
            if u.weight() != v.weight() {
                p.push(Probe::Graded { u: u.clone(), v: v.clone() });
            }
        });
        let domain = format!("{}; pairs of different weight", self.basis_text("u, v"));
        self.push(
            s,
            "graded",
            "(V_(k), V_(l)) = 0 for k != l",
            domain,
            Scope::ExhaustiveByGrading,
            tasks,
        );
    }

    fn invariance(&mut self) {
        let window = self.config.window;
        for (axiom, variant) in [
            ("invariance-literal", InvarianceVariant::Literal),
            ("invariance-standard", InvarianceVariant::Standard),
        ] {
            let mut tasks = Vec::new();
            for (u, v, w) in self.triples() {
                for exponent in range(window) {
                    tasks.push(Task::Single(Probe::Invariance {
                        variant,
                        u: u.clone(),
                        v: v.clone(),
                        w: w.clone(),
                        exponent,
                    }));
                }
            }
            let anchor = match variant {
                InvarianceVariant::Literal => {
                    "(Y(u,x)v, w) = (u, Y(e^{xL(1)}(-x^-2)^{L(0)} v, x^-1)w)"
                }
                InvarianceVariant::Standard => {
                    "(Y(u,x)v, w) = (v, Y(e^{xL(1)}(-x^-2)^{L(0)} u, x^-1)w)"
                }
            };
            let domain = format!(
                "{}; x exponents in [{}, {}]",
                self.basis_text("u, v, w"),
                window[0],
                window[1]
            );
            self.push(Suite::Invariance, axiom, anchor, domain, Scope::Windowed, tasks);
        }
    }
}

/// All checks selected by `config`, in canonical suite order.
pub fn plan(engine: &Engine, config: &VerificationConfig) -> Vec<Check> {
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut planner = Planner {
        config,
        basis: engine.voa().basis_up_to(config.max_weight),
        out: Vec::new(),
    };
    for suite in suites {
        match suite {
            Suite::Voa => planner.voa(),
            Suite::Voc => planner.voc(),
            Suite::Adjoint => planner.adjoint(),
            Suite::Virasoro => planner.virasoro(),
            Suite::Preserving => planner.preserving(),
            Suite::Invariance => planner.invariance(),
        }
    }
    planner.out
}
