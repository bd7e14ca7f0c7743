use super::{
    FreezeEvent, FreezeRules, IntegrateError, IntegratorSettings, Status, StepStats, Trajectory,
};

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense output (Hairer & Wanner's contd5 coefficients).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI controller.
const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const MAX_FREEZE_RETRIES: u32 = 64;

/// Integrates `dy/dt = rhs(t, y)` from `t = 0` to `t_final`.
pub fn integrate<F>(
    rhs: F,
    y0: &[f64],
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory, IntegrateError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve(rhs, y0, t_final, settings, &FreezeRules::none(), None)
}

/// As [`integrate`], with components latched frozen once their freeze group
/// reaches its threshold.
pub fn integrate_with_freeze<F>(
    rhs: F,
    freeze: &FreezeRules,
    y0: &[f64],
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory, IntegrateError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve(rhs, y0, t_final, settings, freeze, None)
}

/// As [`integrate_with_freeze`], stopping with [`Status::Halted`] as soon as
/// `halt(frozen_groups)` returns true after a freeze event.
pub fn integrate_until<F, H>(
    rhs: F,
    freeze: &FreezeRules,
    halt: H,
    y0: &[f64],
    t_final: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory, IntegrateError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    H: Fn(&[bool]) -> bool,
{
    solve(rhs, y0, t_final, settings, freeze, Some(&halt))
}

/// Evaluates the rhs and zeroes the derivatives of frozen components.
fn eval_masked<F>(rhs: &mut F, evals: &mut u64, frozen: &[bool], t: f64, y: &[f64], dy: &mut [f64])
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    rhs(t, y, dy);
    *evals += 1;
    for (d, &fr) in dy.iter_mut().zip(frozen) {
        if fr {
            *d = 0.0;
        }
    }
}

fn solve<F>(
    rhs: F,
    y0: &[f64],
    t_final: f64,
    settings: &IntegratorSettings,
    freeze: &FreezeRules,
    halt: Option<&dyn Fn(&[bool]) -> bool>,
) -> Result<Trajectory, IntegrateError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    settings.validate(t_final)?;
    let n = y0.len();
    freeze.check_indices(n)?;

    let atol = settings.abs_tol;
    let rtol = settings.rel_tol;
    let n_groups = freeze.groups.len();

    let mut y = y0.to_vec();
    let mut group_frozen = vec![false; n_groups];
    let mut member_frozen = vec![false; n];
    let mut events = Vec::new();
    let mut stats = StepStats::default();

    let latch = |y: &mut [f64],
                 t: f64,
                 group_frozen: &mut [bool],
                 member_frozen: &mut [bool],
                 events: &mut Vec<FreezeEvent>|
     -> bool {
        let mut any = false;
        for (g, group) in freeze.groups.iter().enumerate() {
            if !group_frozen[g] && y[group.watch] - group.threshold <= atol {
                group_frozen[g] = true;
                for &m in &group.members {
                    member_frozen[m] = true;
                }
                if let Some(v) = group.snap_to {
                    y[group.watch] = v;
                }
                events.push(FreezeEvent { t, group: g });
                any = true;
            }
        }
        any
    };

    latch(
        &mut y,
        0.0,
        &mut group_frozen,
        &mut member_frozen,
        &mut events,
    );

    let mut times = Vec::with_capacity(settings.output_samples);
    let mut states = Vec::with_capacity(settings.output_samples);
    times.push(0.0);
    states.push(y.clone());
    let mut next_sample = 1usize;

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut cont = [
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    ];

    let mut rhs = rhs;
    let mut evals = 0u64;
    macro_rules! eval {
        ($t:expr, $y:expr, $dy:expr) => {
            eval_masked(&mut rhs, &mut evals, &member_frozen, $t, $y, $dy)
        };
    }

    if let Some(halt) = halt {
        if halt(&group_frozen) {
            return Ok(Trajectory {
                times,
                states,
                status: Status::Halted { t: 0.0 },
                freeze_events: events,
                frozen: group_frozen,
                stats,
            });
        }
    }

    eval!(0.0, &y, &mut k1);

    let mut t = 0.0_f64;
    let mut h = settings.h_init.min(t_final);
    let mut facold = 1e-4_f64;
    let mut last_rejected = false;
    let mut freeze_retries = 0u32;
    let mut steps = 0u64;
    let expo1 = 0.2 - BETA * 0.75;

    let status = loop {
        if t >= t_final {
            break Status::Completed;
        }
        if steps >= settings.max_steps {
            break Status::MaxSteps { t };
        }
        h = h.min(settings.h_max);
        let remaining = t_final - t;
        let last = h >= remaining * (1.0 - 1e-14);
        if last {
            h = remaining;
        }
        if h < settings.h_min && remaining > settings.h_min {
            break Status::StepUnderflow { t, h };
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        eval!(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        eval!(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        eval!(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        eval!(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_final } else { t + h };
        eval!(t_new, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        eval!(t_new, &ynew, &mut k7);
        steps += 1;

        // A watched component carried below its threshold: retry with a
        // step that covers only half the remaining distance. Landing right
        // on the threshold would let the later stages overshoot into the
        // region where the model switches off, which wrecks the error
        // estimate; halving keeps every stage on the smooth side and the
        // approach converges geometrically. Unfrozen watched components sit
        // above `threshold + atol`, so the fraction is in (0, 0.95].
        let mut h_cross = f64::INFINITY;
        for (g, group) in freeze.groups.iter().enumerate() {
            if group_frozen[g] {
                continue;
            }
            let m_new = ynew[group.watch] - group.threshold;
            if m_new < 0.0 {
                let m_old = y[group.watch] - group.threshold;
                let frac = (0.5 * m_old / (m_old - m_new)).clamp(0.0, 0.95);
                h_cross = h_cross.min(h * frac);
            }
        }
        if h_cross.is_finite() {
            stats.freeze_retries += 1;
            freeze_retries += 1;
            if freeze_retries > MAX_FREEZE_RETRIES {
                break Status::StepUnderflow { t, h: h_cross };
            }
            if h_cross >= settings.h_min {
                h = h_cross;
                last_rejected = true;
                continue;
            }
            // The crossing is closer than the smallest admissible step.
            // Over such a short span every component is linear to within
            // roundoff, so advance all of them by Euler to the predicted
            // crossing time and freeze there; the frozen value then carries
            // no jump.
            let mut tau = f64::INFINITY;
            for (g, group) in freeze.groups.iter().enumerate() {
                let w = group.watch;
                if !group_frozen[g] && ynew[w] < group.threshold && k1[w] < 0.0 {
                    tau = tau.min((y[w] - group.threshold) / -k1[w]);
                }
            }
            let tau = if tau.is_finite() {
                tau.clamp(0.0, t_final - t)
            } else {
                0.0
            };
            let t_land = if tau >= t_final - t { t_final } else { t + tau };
            while next_sample < settings.output_samples {
                let ts = settings.sample_time(next_sample, t_final);
                if ts >= t_land {
                    break;
                }
                times.push(ts);
                states.push((0..n).map(|i| y[i] + (ts - t) * k1[i]).collect());
                next_sample += 1;
            }
            for i in 0..n {
                y[i] += tau * k1[i];
            }
            t = t_land;
            let mut froze = latch(
                &mut y,
                t,
                &mut group_frozen,
                &mut member_frozen,
                &mut events,
            );
            if !froze {
                // Derivative not pointing down (curvature-driven crossing):
                // freeze the offenders where they stand.
                for (g, group) in freeze.groups.iter().enumerate() {
                    if !group_frozen[g] && ynew[group.watch] < group.threshold {
                        group_frozen[g] = true;
                        for &m in &group.members {
                            member_frozen[m] = true;
                        }
                        if let Some(v) = group.snap_to {
                            y[group.watch] = v;
                        }
                        events.push(FreezeEvent { t, group: g });
                        froze = true;
                    }
                }
            }
            debug_assert!(froze);
            if next_sample < settings.output_samples
                && settings.sample_time(next_sample, t_final) == t
            {
                times.push(t);
                states.push(y.clone());
                next_sample += 1;
            }
            eval!(t, &y, &mut k1);
            freeze_retries = 0;
            if let Some(halt) = halt {
                if halt(&group_frozen) {
                    break Status::Halted { t };
                }
            }
            continue;
        }

        let mut err = 0.0_f64;
        for i in 0..n {
            let sk = atol + rtol * y[i].abs().max(ynew[i].abs());
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let r = (e / sk).abs();
            // NaN propagates as a rejection.
            if !(r <= err) {
                err = r;
            }
        }

        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            stats.accepted += 1;
            freeze_retries = 0;
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            facold = err.max(1e-4);
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;

            // Dense output for samples strictly inside the step.
            let mut cont_ready = false;
            while next_sample < settings.output_samples {
                let ts = settings.sample_time(next_sample, t_final);
                if ts > t_new {
                    break;
                }
                if ts == t_new {
                    break;
                }
                if !cont_ready {
                    for i in 0..n {
                        let ydiff = ynew[i] - y[i];
                        let bspl = h * k1[i] - ydiff;
                        cont[0][i] = y[i];
                        cont[1][i] = ydiff;
                        cont[2][i] = bspl;
                        cont[3][i] = ydiff - h * k7[i] - bspl;
                        cont[4][i] = h
                            * (D1 * k1[i]
                                + D3 * k3[i]
                                + D4 * k4[i]
                                + D5 * k5[i]
                                + D6 * k6[i]
                                + D7 * k7[i]);
                    }
                    cont_ready = true;
                }
                let s = (ts - t) / h;
                let s1 = 1.0 - s;
                let sample: Vec<f64> = (0..n)
                    .map(|i| {
                        cont[0][i]
                            + s * (cont[1][i]
                                + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i])))
                    })
                    .collect();
                times.push(ts);
                states.push(sample);
                next_sample += 1;
            }

            t = t_new;
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);

            let froze = latch(
                &mut y,
                t,
                &mut group_frozen,
                &mut member_frozen,
                &mut events,
            );

            if next_sample < settings.output_samples
                && settings.sample_time(next_sample, t_final) == t
            {
                times.push(t);
                states.push(y.clone());
                next_sample += 1;
            }

            if froze {
                eval!(t, &y, &mut k1);
                if let Some(halt) = halt {
                    if halt(&group_frozen) {
                        break Status::Halted { t };
                    }
                }
            }
            h = h_new;
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFE).min(1.0 / FAC_MIN);
            last_rejected = true;
        }
    };

    if !matches!(status, Status::Completed) && times.last().is_some_and(|&tl| t > tl) {
        times.push(t);
        states.push(y.clone());
    }
    stats.rhs_evals = evals;

    Ok(Trajectory {
        times,
        states,
        status,
        freeze_events: events,
        frozen: group_frozen,
        stats,
    })
}
