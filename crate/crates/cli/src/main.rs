//! `kr2`: exact computations on the threefold `x + y·f^l + t^{α₃} = 0`,
//! `f = x^d + z^{α₂}`.
//!
//! Exit codes: 0 success or true, 1 false or not a member, 2 validation
//! error, 3 parse error.

use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kr2_core::{
    fiber_type, orbit_classify, parse_poly, parse_scalar, verify, Automorphism, CycloContext,
    Derivation, FiberType, MultiPoly, ParseError, Scalar, SubstitutionData, SurfacePoint,
    Threefold, ThreefoldParams,
};

#[derive(Parser)]
#[command(name = "kr2", version, about = "Exact algebra on Koras-Russell threefolds of the second kind")]
struct Cli {
    #[arg(long, global = true, default_value_t = 3)]
    d: u32,
    #[arg(long, global = true, default_value_t = 1)]
    l: u32,
    #[arg(long, global = true, default_value_t = 2)]
    a2: u32,
    #[arg(long, global = true, default_value_t = 3)]
    a3: u32,
    /// Adjoin a primitive n-th root of unity, written `zeta`.
    #[arg(long, global = true)]
    cyclo: Option<u32>,
    /// Emit JSON (overrides KR2_OUTPUT).
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, env = "KR2_OUTPUT", value_enum, hide = true)]
    output: Option<Output>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Args)]
struct Element {
    /// Polynomial in x and z.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    p: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    mu: String,
}

#[derive(Subcommand)]
enum Command {
    /// Show f, P and the torus weights.
    Params,
    /// Normal form of a polynomial in C[X].
    Normalize {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Equality in C[X].
    Eq {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Apply the automorphism (p, mu) to a polynomial.
    Apply {
        #[command(flatten)]
        elem: Element,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Group product (p1, mu1) * (p2, mu2), acting as a1(a2(g)).
    Compose {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        p1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu1: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        p2: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu2: String,
    },
    Inverse {
        #[command(flatten)]
        elem: Element,
    },
    /// Recover (p, mu) from images of x, y, z, t; reads `v=poly` lines from
    /// stdin when the flags are absent.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// exp(q·∂) for q in x and z.
    Exp {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// The element (p, 1) of the normal subgroup.
    Lift {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Orbit class of a point (x, y, z, t).
    Orbit {
        #[arg(num_args = 4, allow_negative_numbers = true, value_names = ["X", "Y", "Z", "T"])]
        coords: Vec<String>,
    },
    /// Fiber of the projection to (x, z).
    Fiber {
        #[arg(allow_negative_numbers = true)]
        x0: String,
        #[arg(allow_negative_numbers = true)]
        z0: String,
    },
    /// Membership in I = (f^l, x + t^a3).
    MemberI {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Membership in J = f^l·C[X].
    MemberJ {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Image of a point under (p, mu).
    PointAct {
        #[command(flatten)]
        elem: Element,
        #[arg(num_args = 4, allow_negative_numbers = true, value_names = ["X", "Y", "Z", "T"])]
        coords: Vec<String>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Parse(ParseError),
    Invalid(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

struct Reply {
    code: u8,
    text: String,
    json: Value,
}

impl Reply {
    fn ok(text: impl std::fmt::Display, json: Value) -> Self {
        Reply { code: 0, text: text.to_string(), json }
    }

    fn verdict(yes: bool, text: impl std::fmt::Display, json: Value) -> Self {
        Reply { code: if yes { 0 } else { 1 }, text: text.to_string(), json }
    }
}

struct Session {
    space: Threefold,
    cyclo: Option<Arc<CycloContext>>,
}

impl Session {
    fn poly(&self, src: &str) -> Result<MultiPoly, ParseError> {
        parse_poly(src, self.cyclo.as_ref())
    }

    fn scalar(&self, src: &str) -> Result<Scalar, ParseError> {
        parse_scalar(src, self.cyclo.as_ref())
    }

    fn element(&self, p: &str, mu: &str) -> Result<Automorphism, Failure> {
        Automorphism::new(&self.space, self.poly(p)?, self.scalar(mu)?).map_err(invalid)
    }

    fn point(&self, coords: &[String]) -> Result<SurfacePoint, Failure> {
        let c = coords
            .iter()
            .map(|s| self.scalar(s))
            .collect::<Result<Vec<_>, _>>()?;
        let coords: [Scalar; 4] = c.try_into().map_err(|_| invalid("expected four coordinates"))?;
        SurfacePoint::new(&self.space, coords).map_err(invalid)
    }
}

fn images_reply(images: &SubstitutionData, a: &Automorphism) -> Reply {
    Reply::ok(
        format!("{images}\n{a}"),
        json!({ "images": images.to_json(), "automorphism": a.to_json() }),
    )
}

fn automorphism_reply(a: &Automorphism) -> Reply {
    Reply::ok(a, a.to_json())
}

fn run(cli: &Cli, session: &Session) -> Result<Reply, Failure> {
    let space = &session.space;
    Ok(match &cli.cmd {
        Command::Params => {
            let params = space.params();
            let w = space.weights().0;
            Reply::ok(
                format!(
                    "f = {}\nP = {}\nweights = ({}, {}, {}, {})",
                    space.f(),
                    space.defining_poly(),
                    w[0],
                    w[1],
                    w[2],
                    w[3]
                ),
                json!({
                    "d": params.d,
                    "l": params.l,
                    "a2": params.a2,
                    "a3": params.a3,
                    "f": space.f().to_string(),
                    "P": space.defining_poly().to_string(),
                    "weights": w,
                }),
            )
        }
        Command::Normalize { poly } => {
            let nf = space.normal_form(&session.poly(poly)?);
            Reply::ok(&nf, nf.to_json())
        }
        Command::Eq { lhs, rhs } => {
            let equal = space.ring_eq(&session.poly(lhs)?, &session.poly(rhs)?);
            Reply::verdict(equal, equal, json!({ "equal": equal }))
        }
        Command::Apply { elem, poly } => {
            let image = session.element(&elem.p, &elem.mu)?.apply_poly(&session.poly(poly)?);
            Reply::ok(&image, image.to_json())
        }
        Command::Compose { p1, mu1, p2, mu2 } => {
            let a1 = session.element(p1, mu1)?;
            let a2 = session.element(p2, mu2)?;
            automorphism_reply(&a1.compose(&a2).map_err(invalid)?)
        }
        Command::Inverse { elem } => automorphism_reply(&session.element(&elem.p, &elem.mu)?.inverse()),
        Command::Decompose { x, y, z, t } => {
            let images = match (x, y, z, t) {
                (Some(x), Some(y), Some(z), Some(t)) => SubstitutionData {
                    x: session.poly(x)?,
                    y: session.poly(y)?,
                    z: session.poly(z)?,
                    t: session.poly(t)?,
                },
                (None, None, None, None) => {
                    let mut text = String::new();
                    std::io::stdin().read_to_string(&mut text).map_err(invalid)?;
                    SubstitutionData::from_lines(&text, session.cyclo.as_ref()).map_err(
                        |e| match e {
                            kr2_core::ImagesError::Parse(p) => Failure::Parse(p),
                            other => invalid(other),
                        },
                    )?
                }
                _ => return Err(invalid("give all of --x --y --z --t or none")),
            };
            automorphism_reply(&Automorphism::decompose(space, &images).map_err(invalid)?)
        }
        Command::Exp { q } => {
            let d = Derivation::new(space, session.poly(q)?).map_err(invalid)?;
            images_reply(&d.exp_images(), &d.exp_lnd())
        }
        Command::Lift { p } => {
            let a = Automorphism::lift_from_a(space, session.poly(p)?).map_err(invalid)?;
            images_reply(&a.generator_images(), &a)
        }
        Command::Orbit { coords } => {
            let class = orbit_classify(&session.point(coords)?);
            Reply::ok(&class, class.to_json())
        }
        Command::Fiber { x0, z0 } => {
            let fiber = fiber_type(space, &session.scalar(x0)?, &session.scalar(z0)?);
            let tag = match fiber {
                FiberType::Line => "Line",
                FiberType::MultiLine(_) => "MultiLine",
            };
            Reply::ok(fiber, json!({ "type": tag, "count": fiber.count() }))
        }
        Command::MemberI { poly } => {
            match space.ideal_i_membership(&session.poly(poly)?).map_err(invalid)? {
                Some(cert) => Reply::verdict(
                    true,
                    format!("member\nA = {}\nB = {}", cert.a, cert.b),
                    json!({ "member": true, "A": cert.a.to_string(), "B": cert.b.to_string() }),
                ),
                None => Reply::verdict(false, "not member", json!({ "member": false })),
            }
        }
        Command::MemberJ { poly } => match space.ideal_j_membership(&session.poly(poly)?) {
            Some(h) => Reply::verdict(
                true,
                format!("member\nh = {h}"),
                json!({ "member": true, "h": h.to_json() }),
            ),
            None => Reply::verdict(false, "not member", json!({ "member": false })),
        },
        Command::PointAct { elem, coords } => {
            let a = session.element(&elem.p, &elem.mu)?;
            let image = a.act_on_point(&session.point(coords)?).map_err(invalid)?;
            let json = json!({ "point": image.coords().iter().map(Scalar::to_json).collect::<Vec<_>>() });
            Reply::ok(&image, json)
        }
        Command::Verify { seed } => {
            let report = verify::run(space, *seed, session.cyclo.as_ref());
            let all = report.iter().all(|c| c.passed);
            let text = report.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n");
            let json: Vec<Value> = report
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            Reply::verdict(all, text, json!({ "seed": seed, "properties": json }))
        }
    })
}

fn session(cli: &Cli) -> Result<Session, Failure> {
    let params = ThreefoldParams::new(cli.d, cli.l, cli.a2, cli.a3).map_err(invalid)?;
    let cyclo = cli.cyclo.map(CycloContext::new).transpose().map_err(invalid)?;
    Ok(Session {
        space: Threefold::new(params),
        cyclo,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json || cli.output == Some(Output::Json);
    match session(&cli).and_then(|s| run(&cli, &s)) {
        Ok(reply) => {
            if json {
                println!("{}", reply.json);
            } else {
                println!("{}", reply.text);
            }
            ExitCode::from(reply.code)
        }
        Err(failure) => {
            let (code, value, message) = match failure {
                Failure::Parse(e) => (
                    3,
                    json!({ "error": "parse", "offset": e.0.offset, "expected": e.0.expected, "found": e.0.found }),
                    e.to_string(),
                ),
                Failure::Invalid(msg) => (2, json!({ "error": "validation", "message": msg }), msg),
            };
            if json {
                println!("{value}");
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
