#include "gullivr/commands.hpp"

#include <cstdio>
#include <future>
#include <sstream>

#include "gullivr/config.hpp"
#include "gullivr/errors.hpp"
#include "gullivr/telemetry.hpp"

namespace gullivr {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Loads the config and applies flag overrides; maps failures to exit codes.
template <typename Body>
int guarded(const CommandOptions& options, std::ostream& diag, Body body) {
  try {
    ScenarioConfig config = load_config(options.config);
    if (options.ticks_cap) config.scenario.tick_cap = *options.ticks_cap;
    std::filesystem::create_directories(options.out_dir);
    return body(config.scenario);
  } catch (const ConfigError& e) {
    diag << "error: " << options.config.string() << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const ScenarioError& e) {
    diag << "error: " << e.what() << " (" << e.log().frames().size() << " frames logged)\n";
    return kExitScenario;
  } catch (const IoError& e) {
    diag << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    diag << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& e) {
    diag << "error: " << e.what() << '\n';
    return kExitScenario;
  }
}

struct RunStats {
  std::uint64_t seed = 0;
  Policy policy = Policy::kGullivr;
  Summary summary;
};

RunStats run_once(Scenario scenario, Policy policy, std::uint64_t seed) {
  scenario.agent.policy = policy;
  const TelemetryLog log = run_scenario(scenario, seed);
  return {seed, policy, summarize(log)};
}

}  // namespace

int cmd_simulate(const CommandOptions& options, std::optional<Policy> policy, std::ostream& diag) {
  return guarded(options, diag, [&](Scenario& scenario) {
    if (policy) scenario.agent.policy = *policy;
    const std::uint64_t seed = options.seed.value_or(scenario.agent.rng_seed);
    const TelemetryLog log = run_scenario(scenario, seed);
    export_log(log, ExportFormat::kCsv, options.out_dir / "telemetry.csv");
    std::filesystem::remove(events_csv_path(options.out_dir / "telemetry.csv"));
    export_log(log, ExportFormat::kStructured, options.out_dir / "summary.json");
    return static_cast<int>(kExitOk);
  });
}

int cmd_targeting(const CommandOptions& options, std::optional<double> sigma, std::ostream& diag) {
  return guarded(options, diag, [&](Scenario& scenario) {
    const double noise = sigma.value_or(scenario.agent.aim_noise_sigma);
    if (!(noise >= 0.0)) throw ConfigValidationError({"--sigma must be >= 0"});
    if (scenario.targets.empty()) throw ConfigValidationError({"configuration lists no targets"});
    const std::uint64_t seed = options.seed.value_or(scenario.agent.rng_seed);
    const TelemetryLog log = run_targeting(scenario, seed, noise);

    std::ostringstream rows;
    rows << "target,attempt,center_x,center_z,landing_x,landing_z,miss,zone\n";
    for (const TargetRecord& r : log.targets()) {
      rows << r.target << ',' << r.attempt << ',' << num(r.center.x) << ',' << num(r.center.z) << ','
           << num(r.landing.x) << ',' << num(r.landing.z) << ',' << num(r.miss) << ','
           << hit_zone_name(classify_hit(r.miss, r.radius)) << '\n';
    }
    write_text_file(options.out_dir / "targeting.csv", rows.str());
    export_log(log, ExportFormat::kStructured, options.out_dir / "targeting_summary.json");
    return static_cast<int>(kExitOk);
  });
}

int cmd_compare(const CommandOptions& options, const std::vector<std::uint64_t>& seeds,
                std::ostream& diag) {
  if (seeds.empty()) {
    diag << "error: compare needs at least one seed\n";
    return kExitConfig;
  }
  return guarded(options, diag, [&](Scenario& scenario) {
    std::vector<std::future<RunStats>> pending;
    for (std::uint64_t seed : seeds) {
      for (Policy policy : {Policy::kGullivr, Policy::kTeleport}) {
        pending.push_back(std::async(std::launch::async, run_once, scenario, policy, seed));
      }
    }
    std::vector<RunStats> runs;
    for (auto& f : pending) runs.push_back(f.get());

    std::ostringstream per_run;
    per_run << "seed,policy,physical_m_per_min,physical_m,virtual_m,duration_s,transitions,"
               "teleports,resets\n";
    for (const RunStats& r : runs) {
      const Summary& s = r.summary;
      per_run << r.seed << ',' << policy_name(r.policy) << ',' << num(s.meters_per_minute.value_or(0.0))
              << ',' << num(s.physical_path_m) << ',' << num(s.virtual_path_m) << ','
              << num(s.duration_s) << ',' << s.event_counts.at("transition_begin") << ','
              << s.event_counts.at("teleport") << ',' << s.event_counts.at("reset") << '\n';
    }

    std::ostringstream table;
    table << "policy,runs,mean_physical_m_per_min,mean_physical_m,mean_virtual_m,mean_duration_s,"
             "mean_transitions,mean_teleports,mean_resets\n";
    for (Policy policy : {Policy::kGullivr, Policy::kTeleport}) {
      double mpm = 0, phys = 0, virt = 0, dur = 0, trans = 0, tele = 0, resets = 0;
      double n = 0;
      for (const RunStats& r : runs) {
        if (r.policy != policy) continue;
        const Summary& s = r.summary;
        mpm += s.meters_per_minute.value_or(0.0);
        phys += s.physical_path_m;
        virt += s.virtual_path_m;
        dur += s.duration_s;
        trans += static_cast<double>(s.event_counts.at("transition_begin"));
        tele += static_cast<double>(s.event_counts.at("teleport"));
        resets += static_cast<double>(s.event_counts.at("reset"));
        n += 1;
      }
      table << policy_name(policy) << ',' << n << ',' << num(mpm / n) << ',' << num(phys / n) << ','
            << num(virt / n) << ',' << num(dur / n) << ',' << num(trans / n) << ',' << num(tele / n)
            << ',' << num(resets / n) << '\n';
    }
    write_text_file(options.out_dir / "compare.csv", table.str());
    write_text_file(options.out_dir / "compare_runs.csv", per_run.str());
    return static_cast<int>(kExitOk);
  });
}

}  // namespace gullivr
