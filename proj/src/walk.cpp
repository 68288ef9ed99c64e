#include "trapwalk/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "trapwalk/formulas.hpp"

namespace trapwalk {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Trace/checkpoint bookkeeping shared by both engines.
struct Recorder {
  const RunOptions& opt;
  WalkRun& run;
  std::uint64_t next_trace = 1;
  std::uint64_t cp_stride = 0;
  std::uint64_t next_cp = 0;

  Recorder(const RunOptions& o, WalkRun& r, std::uint64_t max_steps) : opt(o), run(r) {
    if (o.batch_checkpoints > 0 && max_steps > 0) {
      cp_stride = std::max<std::uint64_t>(1, max_steps / o.batch_checkpoints);
      next_cp = cp_stride;
    }
  }

  void at_arrival(std::uint64_t step, double clock, std::int64_t pos) {
    if (opt.record_arrivals && run.arrivals.size() < opt.record_arrivals)
      run.arrivals.push_back(pos);
    if (opt.log_trace && step >= next_trace) {
      run.trace.push_back({step, clock, pos});
      while (next_trace <= step) next_trace <<= 1;
    }
    if (next_cp && step >= next_cp) {
      run.checkpoints.push_back({step, clock, pos});
      while (next_cp <= step) next_cp += cp_stride;
    }
  }
};

}  // namespace

std::int64_t step_backbone(std::int64_t position, double lambda, RandomStream& stream) {
  require(lambda >= 0.0, "step_backbone: lambda must be >= 0");
  const double p_left = 1.0 - p_right(lambda);
  return position + (stream.next_uniform() > p_left ? 1 : -1);
}

WalkRun run_reduced(TrapEnvironment& env, const HoldingTimeModel& hold, double lambda,
                    StopRule stop, ReplicaKey seed, const RunOptions& opt) {
  require(lambda >= 0.0, "run_reduced: lambda must be >= 0");
  require(stop.max_steps > 0 || std::isfinite(stop.max_clock),
          "run_reduced: stop rule must bound steps or clock");

  WalkRun run;
  run.model = "reduced";
  run.lambda = lambda;
  run.sites = SiteTable(opt.site_stats);
  Recorder rec(opt, run, stop.max_steps);

  const double p_left = 1.0 - p_right(lambda);
  std::int64_t pos = 0;
  double clock = 0.0;
  std::uint64_t steps = 0;

  for (;;) {
    const std::uint32_t k = run.sites.bump_visit(pos);
    if (opt.site_stats && k == 1) run.sites.note_first_clock(pos, clock);
    rec.at_arrival(steps, clock, pos);
    if (stop.max_steps > 0 && steps >= stop.max_steps) break;

    RandomStream hold_stream = stream_for(seed, Channel::Hold, pos, k);
    const double tau = hold.sample(env.site(pos), hold_stream);
    clock += tau;
    if (!std::isfinite(clock)) throw std::overflow_error("run_reduced: clock overflow");
    if (opt.site_stats) run.sites.add_time(pos, tau);
    if (clock >= stop.max_clock) break;

    RandomStream step_stream = stream_for(seed, Channel::Step, pos, k);
    pos += step_stream.next_uniform() > p_left ? 1 : -1;
    ++steps;
  }

  run.final_position = pos;
  run.elapsed_clock = clock;
  run.steps = steps;
  run.backbone_moves = steps;
  return run;
}

namespace {

WalkRun run_trap_graph(TrapEnvironment& env, double lambda, double q, std::uint64_t max_steps,
                       ReplicaKey seed, const RunOptions& opt, EnvKind expected_kind,
                       const char* tag) {
  require(env.kind() == expected_kind, "trap-graph run: environment kind mismatch");
  require(lambda >= 0.0, "trap-graph run: lambda must be >= 0");
  require(q > 0.0 && q < 1.0, "trap-graph run: q must be in (0,1)");
  require(max_steps > 0, "trap-graph run: max_steps must be positive");

  WalkRun run;
  run.model = tag;
  run.lambda = lambda;
  run.sites = SiteTable(opt.site_stats);
  Recorder rec(opt, run, max_steps);

  const double p_left = 1.0 - p_right(lambda);
  std::int64_t pos = 0;
  std::uint64_t t = 0;
  std::uint64_t backbone_moves = 0;
  bool stopped_in_trap = false;

  for (;;) {
    const std::uint32_t k = run.sites.bump_visit(pos);
    if (opt.site_stats && k == 1) run.sites.note_first_clock(pos, static_cast<double>(t));
    rec.at_arrival(t, static_cast<double>(t), pos);
    if (t >= max_steps) break;

    const SiteInfo& si = env.site(pos);
    RandomStream trap_stream = stream_for(seed, Channel::Trap, pos, k);
    RandomStream step_stream = stream_for(seed, Channel::Step, pos, k);
    const double u_dir = step_stream.next_uniform();
    const std::uint64_t visit_start = t;

    // Trap entries (probability 1-q each round at a trapped site), then the
    // single horizontal move that ends the visit.
    for (;;) {
      if (si.trap_len > 0 && trap_stream.next_uniform() > q) {
        t += sample_trap_excursion(si.trap_len, lambda, trap_stream);
        if (t >= max_steps) {
          t = max_steps;  // budget ran out mid-excursion; position stays at the root
          stopped_in_trap = true;
          break;
        }
      } else {
        ++t;
        ++backbone_moves;
        break;
      }
    }

    if (opt.site_stats) run.sites.add_time(pos, static_cast<double>(t - visit_start));
    if (stopped_in_trap) break;
    pos += u_dir > p_left ? 1 : -1;
  }

  run.final_position = pos;
  run.elapsed_clock = static_cast<double>(t);
  run.steps = t;
  run.backbone_moves = backbone_moves;
  return run;
}

}  // namespace

WalkRun run_comb_graph(TrapEnvironment& env, double lambda, double q, std::uint64_t max_steps,
                       ReplicaKey seed, const RunOptions& opt) {
  return run_trap_graph(env, lambda, q, max_steps, seed, opt, EnvKind::CombGeometric,
                        "comb_graph");
}

WalkRun run_ladder_graph(TrapEnvironment& env, double lambda, double q, std::uint64_t max_steps,
                         ReplicaKey seed, const RunOptions& opt) {
  return run_trap_graph(env, lambda, q, max_steps, seed, opt, EnvKind::LadderMarkov,
                        "ladder_graph");
}

std::int64_t regeneration_margin(double lambda) {
  require(lambda > 0.0, "regeneration_margin: lambda must be positive");
  return static_cast<std::int64_t>(std::ceil(64.0 / std::tanh(lambda)));
}

RegenerationScan detect_regenerations(const WalkRun& run) {
  RegenerationScan scan;
  scan.window_lo = 0;
  const std::int64_t margin = regeneration_margin(run.lambda);
  scan.window_hi = std::max<std::int64_t>(0, run.final_position - margin);
  scan.unresolved =
      run.final_position >= scan.window_hi ? run.final_position - scan.window_hi + 1 : 0;
  for (std::int64_t x = scan.window_lo; x < scan.window_hi; ++x)
    if (run.sites.visits(x) == 1) scan.sites.push_back(x);
  return scan;
}

}  // namespace trapwalk
