//! Finite abelian groups with a left action of a finite group.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{hom_group, AbMap, FinAbGroup, HomGroup};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupHom};

/// Action tables of groups up to this order are checked exhaustively.
pub const EXHAUSTIVE_ACTION_LIMIT: usize = 128;
const ACTION_SAMPLES: usize = 20_000;

struct ModuleData {
    group: FiniteGroup,
    coeff: FinAbGroup,
    actions: Vec<AbMap>,
    /// `actions[g]` flattened row-major, one `rank x rank` block per element.
    flat: Vec<i64>,
    trivial: bool,
}

/// `coeff` with a left action of `group`; `action(g)` is an automorphism and
/// `action(gh) = action(g) ∘ action(h)`. Cloning is cheap.
#[derive(Clone)]
pub struct GModule(Arc<ModuleData>);

impl GModule {
    /// Completes an action given on generators by composition along the
    /// Cayley graph. An inconsistency is reported with the word (a sequence of
    /// generators) whose two evaluations disagree.
    pub fn new(group: &FiniteGroup, coeff: &FinAbGroup, generator_actions: &[(usize, AbMap)]) -> Result<Self> {
        for (g, a) in generator_actions {
            if *g >= group.order() {
                return Err(Error::InvalidInput(format!("generator {g} out of range")));
            }
            if a.source() != coeff || a.target() != coeff {
                return Err(Error::TypeMismatch(format!("action of {g} is not an endomorphism of {coeff}")));
            }
        }
        let n = group.order();
        let mut actions: Vec<Option<AbMap>> = vec![None; n];
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); n];
        actions[group.identity()] = Some(AbMap::identity(coeff));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            let ax = actions[x].clone().expect("queued elements have actions");
            for (g, ag) in generator_actions {
                let y = group.mul(x, *g);
                let ay = ag.then(&ax)?;
                match &actions[y] {
                    None => {
                        actions[y] = Some(ay);
                        let mut w = words[x].clone();
                        w.push(*g);
                        words[y] = w;
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != ay => {
                        let mut w = words[x].clone();
                        w.push(*g);
                        return Err(Error::ActionNotHomomorphism(w));
                    }
                    Some(_) => {}
                }
            }
        }
        let reached = actions.iter().filter(|a| a.is_some()).count();
        if reached < n {
            return Err(Error::GeneratorsDontGenerate { reached, order: n });
        }
        Ok(Self::build(group, coeff, actions.into_iter().map(Option::unwrap).collect()))
    }

    /// Takes the action of every element and checks the composition law
    /// (exhaustively up to [`EXHAUSTIVE_ACTION_LIMIT`], sampled above).
    pub fn from_action_table(group: &FiniteGroup, coeff: &FinAbGroup, actions: Vec<AbMap>) -> Result<Self> {
        if actions.len() != group.order() {
            return Err(Error::InvalidInput("one action map per element is required".into()));
        }
        if actions.iter().any(|a| a.source() != coeff || a.target() != coeff) {
            return Err(Error::TypeMismatch("action maps must be endomorphisms of the coefficients".into()));
        }
        if actions[group.identity()] != AbMap::identity(coeff) {
            return Err(Error::ActionNotHomomorphism(vec![group.identity()]));
        }
        let check = |g: usize, h: usize| -> Result<()> {
            if actions[group.mul(g, h)] != actions[h].then(&actions[g])? {
                return Err(Error::ActionNotHomomorphism(vec![g, h]));
            }
            Ok(())
        };
        let n = group.order();
        if n <= EXHAUSTIVE_ACTION_LIMIT {
            for g in 0..n {
                for h in 0..n {
                    check(g, h)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x676d_6f64);
            for _ in 0..ACTION_SAMPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(Self::build(group, coeff, actions))
    }

    fn build(group: &FiniteGroup, coeff: &FinAbGroup, actions: Vec<AbMap>) -> Self {
        let r = coeff.rank();
        let mut flat = Vec::with_capacity(actions.len() * r * r);
        for a in &actions {
            for i in 0..r {
                flat.extend_from_slice(a.matrix().row(i));
            }
        }
        let id = AbMap::identity(coeff);
        let trivial = actions.iter().all(|a| *a == id);
        GModule(Arc::new(ModuleData {
            group: group.clone(),
            coeff: coeff.clone(),
            actions,
            flat,
            trivial,
        }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn coeff(&self) -> &FinAbGroup {
        &self.0.coeff
    }

    pub fn action(&self, g: usize) -> &AbMap {
        &self.0.actions[g]
    }

    pub fn is_trivial_action(&self) -> bool {
        self.0.trivial
    }

    /// `g · m`.
    pub fn act(&self, g: usize, m: &[i64]) -> Vec<i64> {
        let mut out = vec![0; m.len()];
        self.act_into(g, m, &mut out);
        out
    }

    /// `g · m` written into `out`, reduced.
    #[inline]
    pub fn act_into(&self, g: usize, m: &[i64], out: &mut [i64]) {
        let r = self.0.coeff.rank();
        if self.0.trivial {
            out.copy_from_slice(m);
            return;
        }
        let block = &self.0.flat[g * r * r..(g + 1) * r * r];
        for i in 0..r {
            let row = &block[i * r..(i + 1) * r];
            let d = self.0.coeff.factors()[i] as i64;
            let mut s: i64 = 0;
            for (a, x) in row.iter().zip(m) {
                s = (s + a * x) % d;
            }
            out[i] = s.rem_euclid(d);
        }
    }

    /// Same group, coefficients and action.
    pub fn same_as(&self, other: &GModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.group().same_as(other.group()) && self.coeff() == other.coeff() && self.0.actions == other.0.actions)
    }

    /// Checks that `t: self.coeff -> other.coeff` commutes with the actions;
    /// reports the first element where it does not.
    pub fn check_equivariant(&self, other: &GModule, t: &AbMap) -> Result<()> {
        if !self.group().same_as(other.group()) {
            return Err(Error::GroupMismatch("modules over different groups".into()));
        }
        if t.source() != self.coeff() || t.target() != other.coeff() {
            return Err(Error::TypeMismatch("coefficient map does not fit the modules".into()));
        }
        for &g in self.group().generators() {
            if self.action(g).then(t)? != t.then(other.action(g))? {
                return Err(Error::NotEquivariant(g));
            }
        }
        Ok(())
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule({} over {}, {})",
            self.coeff(),
            self.group().label(),
            if self.is_trivial_action() { "trivial action" } else { "nontrivial action" }
        )
    }
}

pub fn trivial_module(group: &FiniteGroup, coeff: &FinAbGroup) -> GModule {
    GModule::build(group, coeff, vec![AbMap::identity(coeff); group.order()])
}

/// The `H`-module with `h` acting as `f(h)`.
pub fn restrict_module(m: &GModule, f: &GroupHom) -> Result<GModule> {
    if !f.codomain().same_as(m.group()) {
        return Err(Error::CodomainMismatch(format!(
            "homomorphism lands in {} but the module lives over {}",
            f.codomain().label(),
            m.group().label()
        )));
    }
    let actions = f.domain().elements().map(|h| m.action(f.apply(h)).clone()).collect();
    Ok(GModule::build(f.domain(), m.coeff(), actions))
}

/// Fixed points with their inclusion into the coefficients.
pub fn invariants(m: &GModule) -> Result<(FinAbGroup, AbMap)> {
    let coeff = m.coeff();
    let mut sub = coeff.clone();
    let mut inc = AbMap::identity(coeff);
    for &g in m.group().generators() {
        let cols: Vec<Vec<i64>> = (0..sub.rank())
            .map(|j| {
                let x = inc.apply(&sub.basis(j));
                coeff.sub(&m.act(g, &x), &x)
            })
            .collect();
        let step = AbMap::from_columns(&sub, coeff, &cols)?;
        let (k, k_inc) = step.kernel()?;
        inc = k_inc.then(&inc)?;
        sub = k;
    }
    Ok((sub, inc))
}

/// `Hom(M, A)` with `(g·f)(m) = g·f(g^-1 m)`, together with the indexer
/// between its coefficient vectors and maps.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: GModule,
    pub hom: HomGroup,
    /// The module `A`.
    pub target: GModule,
}

pub fn hom_module(m: &GModule, a: &GModule) -> Result<HomModule> {
    if !m.group().same_as(a.group()) {
        return Err(Error::GroupMismatch(format!(
            "modules over {} and {}",
            m.group().label(),
            a.group().label()
        )));
    }
    let g = m.group();
    let hom = hom_group(m.coeff(), a.coeff())?;
    let coeff = hom.group().clone();
    let mut gen_actions = Vec::new();
    for &x in g.generators() {
        let cols: Vec<Vec<i64>> = (0..coeff.rank())
            .map(|j| {
                let f = hom.to_map(&coeff.basis(j));
                let gf = m.action(g.inv(x)).then(&f).and_then(|h| h.then(a.action(x)));
                gf.map(|gf| hom.from_map(&gf))
            })
            .collect::<Result<_>>()?;
        gen_actions.push((x, AbMap::from_columns(&coeff, &coeff, &cols)?));
    }
    let module = GModule::new(g, &coeff, &gen_actions)?;
    Ok(HomModule {
        module,
        hom,
        target: a.clone(),
    })
}

/// `Hom(M, Z/e)` with the contragredient action, `e` the exponent of `M`.
pub fn dual_module(m: &GModule) -> Result<HomModule> {
    let target = trivial_module(m.group(), &FinAbGroup::cyclic(m.coeff().exponent()));
    hom_module(m, &target)
}
