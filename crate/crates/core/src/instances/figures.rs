//! Three small hand-made instances: a tight CNS repair, a directed cycle
//! whose repair must move almost everyone, and a two-hub game that forces
//! large moves on every update of an alternating sequence.

use serde::Serialize;

use super::{Draft, GadgetBundle, Role};
use crate::error::{Error, Result};
use crate::game::{BlockGameBuilder, ClassTag, Game};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::stability::StabilityNotion;
use crate::update::{apply_update, UpdateEvent};

fn r(v: i64) -> Rational {
    Rational::from(v)
}

/// Eight friends-and-enemies agents where the CNS repair needs exactly four
/// moves: `{0,4,5}` like `{1,2,3}`, and 6 and 7 like each other until the
/// update turns that pair hostile.
pub fn build_fig3_tight() -> GadgetBundle {
    let across = |i: usize, j: usize| [0, 4, 5].contains(&i) && [1, 2, 3].contains(&j);
    let friends = |i: usize, j: usize| (i.min(j), i.max(j)) == (6, 7) || across(i, j) || across(j, i);
    let game = Game::from_fn(8, true, ClassTag::Feg, |i, j| if friends(i, j) { r(1) } else { r(-1) })
        .expect("valid friends-and-enemies game");
    let partition = Partition::from_coalitions(8, [vec![0, 1, 2, 3, 6, 7], vec![4], vec![5]]).expect("valid");
    Draft {
        game,
        partition,
        update: UpdateEvent::single_pair(6, 7, r(-1)),
        notion: StabilityNotion::Cns,
        budget: 4,
        roles: Vec::new(),
    }
    .seal("tight-cns", None)
    .expect("the start partition is CNS")
}

/// Directed friendship cycle `i -> i+1 (mod n)`, everyone in one coalition,
/// and the update that breaks the edge `n-1 -> 0`.
pub fn build_fig4_cycle(n: usize, notion: StabilityNotion) -> Result<GadgetBundle> {
    if n < 4 {
        return Err(Error::input(format!("the cycle needs n >= 4, got {n}")));
    }
    if !matches!(notion, StabilityNotion::Cns | StabilityNotion::Cis) {
        return Err(Error::input(format!("the cycle is built for CNS or CIS, not {notion}")));
    }
    let game = Game::from_fn(n, false, ClassTag::Feg, |i, j| if j == (i + 1) % n { r(1) } else { r(-1) })?;
    Draft {
        game,
        partition: Partition::grand(n),
        update: UpdateEvent::single_pair(n - 1, 0, r(-1)),
        notion,
        budget: n - 3,
        roles: Vec::new(),
    }
    .seal("directed-cycle", None)
}

/// The two-hub game and both directions of its alternating update.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpDownGadget {
    /// Hubs apart; `update` makes them friends.
    pub down: GadgetBundle,
    /// Turns the hubs back into enemies.
    pub back: UpdateEvent,
    /// The unique stable partition once the hubs are friends.
    pub up_partition: Partition,
}

impl UpDownGadget {
    pub fn up_game(&self) -> Result<Game> {
        self.down.altered_game()
    }

    /// `m` updates alternating between the two directions, starting with
    /// the one that makes the hubs friends.
    pub fn alternating(&self, m: usize) -> Vec<UpdateEvent> {
        (0..m).map(|i| if i % 2 == 0 { self.down.update.clone() } else { self.back.clone() }).collect()
    }
}

/// Hubs `z1` and `z2` each lead a clique (`X` and `Y`) of `(n-2)/2` agents.
/// The hubs' mutual value swings between `-n^2` and `n^2`, and each swing
/// forces `n/2` agents to move. Odd `n` adds an agent who dislikes
/// everyone.
pub fn build_fig5_updown(n: usize) -> Result<UpDownGadget> {
    if n < 6 {
        return Err(Error::input(format!("the two-hub game needs n >= 6, got {n}")));
    }
    let odd = n % 2 == 1;
    let l = (n - 2 - usize::from(odd)) / 2;
    let n_val = Rational::from(n);
    let sq = Rational::from(n * n);
    let mut b = BlockGameBuilder::new(r(1));
    let x = b.block(l);
    let y = b.block(l);
    let z1 = b.block(1);
    let z2 = b.block(1);
    b.set_sym(z1, x, n_val.clone()).set_sym(z2, y, n_val).set_sym(z1, z2, -sq.clone());
    let mut roles = vec![
        Role { name: "X".into(), start: 0, len: l },
        Role { name: "Y".into(), start: l, len: l },
        Role { name: "z1".into(), start: 2 * l, len: 1 },
        Role { name: "z2".into(), start: 2 * l + 1, len: 1 },
    ];
    if odd {
        let loner = b.block(1);
        for other in [x, y, z1, z2] {
            b.set_sym(loner, other, r(-1));
        }
        roles.push(Role { name: "loner".into(), start: n - 1, len: 1 });
    }
    let game = b.build(true, ClassTag::Strict)?;
    let (a1, a2) = (2 * l, 2 * l + 1);
    let mut down: Vec<Vec<usize>> = vec![(0..l).chain([a1]).collect(), (l..2 * l).chain([a2]).collect()];
    let mut up: Vec<Vec<usize>> = vec![(0..2 * l + 2).collect()];
    if odd {
        down.push(vec![n - 1]);
        up.push(vec![n - 1]);
    }
    let bundle = Draft {
        game,
        partition: Partition::from_coalitions(n, down)?,
        update: UpdateEvent::single_pair(a1, a2, sq.clone()),
        notion: StabilityNotion::Is,
        budget: n / 2,
        roles,
    }
    .seal("up-down", None)?;
    let back = UpdateEvent::single_pair(a1, a2, -sq);
    apply_update(&bundle.altered_game()?, &back)?;
    Ok(UpDownGadget { down: bundle, back, up_partition: Partition::from_coalitions(n, up)? })
}
