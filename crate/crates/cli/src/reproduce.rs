//! Registered example scenarios with their expected outcomes.

use serde::{Deserialize, Serialize};
use subshift::circuits::{exit_of, is_circuit, strong_exit};
use subshift::criteria::{self, replay_verdict, Analysis, CostValue};
use subshift::paction::sample_points;
use subshift::spectrum::{limit_ball, xi_ball, PointFamily, DEFAULT_WINDOW};
use subshift::words::words_of_length;
use subshift::{EvPeriodicWord, Point, Subshift, Verdict, Witness, Word};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reproduction {
    pub id: String,
    pub claim: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

pub const IDS: [&str; 9] = [
    "even-strong-exits",
    "even-isolated-point",
    "even-not-topfree",
    "even-not-minimal",
    "even-anomalous-xi",
    "pow2-unbounded-cost",
    "markov3-simple-nonthomsen",
    "ex14-condI",
    "sft001-exits",
];

struct Checks(Vec<Check>);

impl Checks {
    fn eq(&mut self, name: impl Into<String>, expected: impl ToString, got: impl ToString) {
        let (expected, got) = (expected.to_string(), got.to_string());
        let pass = expected == got;
        self.0.push(Check { name: name.into(), expected, got, pass });
    }

    fn truth(&mut self, name: impl Into<String>, got: bool, detail: impl ToString) {
        self.0.push(Check { name: name.into(), expected: "true".into(), got: detail.to_string(), pass: got });
    }
}

fn builtin(name: &str) -> Subshift {
    Subshift::builtin(name).expect("built-in shifts load")
}

fn show_verdict(v: &Verdict) -> String {
    format!("{} ({:?})", v.value, v.confidence)
}

fn replay_check(c: &mut Checks, s: &Subshift, v: &Verdict) {
    let r = replay_verdict(s, v);
    c.truth(format!("{} witness replays", v.property), r.is_ok(), r.err().unwrap_or_else(|| "ok".into()));
}

pub fn reproduce(id: &str) -> Result<Reproduction, CliError> {
    let mut c = Checks(Vec::new());
    let claim = match id {
        "even-strong-exits" => {
            let s = builtin("even");
            let mut circuits = 0;
            for n in 1..=8 {
                for gamma in words_of_length(2, n) {
                    if !is_circuit(&s, &gamma)? {
                        continue;
                    }
                    circuits += 1;
                    let name = s.show_word(&gamma);
                    let Some(y) = strong_exit(&s, &gamma)?.0 else {
                        c.truth(format!("strong exit for {name}"), false, "none");
                        continue;
                    };
                    let ok = y != EvPeriodicWord::periodic(gamma.clone()).unwrap()
                        && (1..=5).all(|k| s.contains_point(&y.prepend(&gamma.repeat(k))));
                    // the textbook exits: 0^∞ for 1^k, otherwise γ'01^∞
                    // for the first 0 of γ = γ'0γ''
                    let zero = s.word("0")?.letters()[0];
                    let textbook = match gamma.letters().iter().position(|&a| a == zero) {
                        None => s.point("(0)")?,
                        Some(i) => EvPeriodicWord::new(Word(gamma.letters()[..=i].to_vec()), s.word("1")?).unwrap(),
                    };
                    let textbook_ok = (1..=5).all(|k| s.contains_point(&textbook.prepend(&gamma.repeat(k))));
                    if !ok || !textbook_ok || n <= 2 {
                        c.truth(
                            format!("strong exit for {name}"),
                            ok && textbook_ok,
                            format!("{} (textbook form {})", s.show_point(&y), s.show_point(&textbook)),
                        );
                    }
                }
            }
            c.truth("circuits of length ≤ 8 checked", circuits > 0, circuits);
            c.eq("strong exit of 11", "(0)", strong_exit(&s, &s.word("11")?)?.0.map(|y| s.show_point(&y)).unwrap_or_default());
            "every circuit of the even shift of length ≤ 8 has a strong exit"
        }
        "even-isolated-point" => {
            let s = builtin("even");
            let cfg = s.follower_config(&[s.word("01")?, s.word("011")?]);
            let got = s.follower_unique_point(&cfg)?.map(|x| s.show_point(&x)).unwrap_or("none".into());
            c.eq("follower_unique_point({01, 011})", "(1)", got);
            "in the even shift, F_01 ∩ F_011 = {1^∞}"
        }
        "even-not-topfree" => {
            let s = builtin("even");
            let v = criteria::is_topologically_free(&s)?;
            c.eq("topologically free", "false", v.value);
            let gamma = match &v.witness {
                Some(Witness::IsolatedPeriodic { gamma, .. }) => gamma.clone(),
                other => format!("{other:?}"),
            };
            c.eq("isolated periodic point", "1", gamma);
            replay_check(&mut c, &s, &v);
            "the spectral action of the even shift is not topologically free"
        }
        "even-not-minimal" => {
            let s = builtin("even");
            let m = criteria::is_minimal(&s)?;
            let simple = criteria::is_simple(&s)?;
            c.eq("minimal", "false", m.value);
            c.eq("simple", "false", simple.value);
            replay_check(&mut c, &s, &m);
            "the even shift is not minimal, so its algebra is not simple"
        }
        "even-anomalous-xi" => {
            let s = builtin("even");
            let fam = PointFamily::parse(&s, "even-odd-ones")?;
            let (ball, stab) = limit_ball(&s, &fam, 2, 10, DEFAULT_WINDOW)?;
            c.truth("stabilized within k ≤ 10", stab.stabilized_at.is_some(), format!("{:?}", stab.stabilized_at));
            let al = s.alphabet();
            let zinv = al.parse_element("0^-1")?;
            let xi = xi_ball(&s, &s.point("(1)")?, 2);
            if let Some(ball) = ball {
                c.eq("stem", "(1)", ball.stem.map(|x| s.show_point(&x)).unwrap_or_default());
                c.eq("0^-1 in limit ball", "false", ball.members.contains(&zinv));
                c.truth("limit ball differs from ξ(1^∞)", ball.members != xi.members, ball.members.len());
            }
            c.eq("0^-1 in ξ(1^∞)", "true", xi.members.contains(&zinv));
            "the limit of ξ(1^{2k+1}0^∞) is a spectrum element outside the range of ξ"
        }
        "pow2-unbounded-cost" => {
            let s = builtin("pow2");
            let b = [s.word("0")?];
            let one = criteria::cost(&s, &b, &s.point("111111(0)")?)?;
            c.eq("cost({0}, 1^6 0^∞)", "2", one.cost);
            let sup = criteria::sup_cost(&s, &b)?;
            c.eq("sup_cost({0})", "inf", sup.cost);
            for m in 1..=6u32 {
                let n = 3 * 2usize.pow(m - 1);
                let x = EvPeriodicWord::new(s.word("1")?.repeat(n), s.word("0")?).unwrap();
                let got = criteria::cost(&s, &b, &x)?.cost;
                c.truth(
                    format!("cost at n = {n} ≥ {}", 2usize.pow(m - 1)),
                    got >= CostValue::Finite(2usize.pow(m - 1)),
                    got,
                );
            }
            "on the power-of-two shift the cost of {0} is unbounded"
        }
        "markov3-simple-nonthomsen" => {
            let s = builtin("markov3");
            c.eq("simple", "true", criteria::is_simple(&s)?.value);
            let sur = s.is_surjective()?;
            c.eq("surjective", "false", sur.value);
            c.eq("non-extendable word", "Some(NonExtendable { word: \"1\" })", format!("{:?}", sur.witness));
            let t = criteria::thomsen_sup(&s, &[s.word("2")?])?;
            c.eq("thomsen_sup({2})", "inf", t.cost);
            c.eq("attained at", "1(2)", t.attained_at.unwrap_or_default());
            "a simple Markov shift whose shift map is not onto, with unbounded Thomsen cost"
        }
        "ex14-condI" => {
            let s = builtin("ex14");
            let al = s.alphabet();
            let show = |ws: Vec<Word>| ws.iter().map(|w| s.show_word(w)).collect::<Vec<_>>().join(",");
            let z = Point::parse(al, "thue-morse(1,2)")?;
            c.eq("Λ₁(z)", "0,1,2", show(s.lambda_l(&z, 1).0));
            let mut others = 0;
            for x in sample_points(&s, 40) {
                if others == 20 {
                    break;
                }
                others += 1;
                c.eq(format!("Λ₁({})", s.show_point(&x)), "1,2", show(s.lambda_l(&Point::Ev(x), 1).0));
            }
            c.eq("sampled points", 20, others);
            let v = Analysis::new(&s, Some(32)).topologically_free()?;
            c.eq("topologically free at depth 32", "true (Bounded { depth: 32 })", show_verdict(&v));
            "a topologically free shift failing condition (I) at the Thue–Morse point"
        }
        "sft001-exits" => {
            let s = builtin("sft001");
            c.eq("exit for 0", "(1)", exit_of(&s, &s.word("0")?)?.map(|y| s.show_point(&y)).unwrap_or("none".into()));
            c.eq("exit for 00", "none", exit_of(&s, &s.word("00")?)?.map(|y| s.show_point(&y)).unwrap_or("none".into()));
            "with 001 forbidden, the circuit 0 has an exit and 00 has none"
        }
        _ => return Err(CliError::Input(format!("unknown example id `{id}` (known: {})", IDS.join(", ")))),
    };
    let pass = c.0.iter().all(|k| k.pass);
    Ok(Reproduction { id: id.into(), claim: claim.into(), pass, checks: c.0 })
}
