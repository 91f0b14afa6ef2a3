// Command-line front end: import contact traces, generate synthetic ones,
// compute reachability bounds for delay lists, run the exact oracle, emit
// metrics CSVs and snapshot exports.
//
// Exit codes: 0 ok, 1 usage, 2 validation failure, 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "trg/engine.hpp"
#include "trg/generators.hpp"
#include "trg/journey_oracle.hpp"
#include "trg/metrics.hpp"
#include "trg/stream_algebra.hpp"
#include "trg/stream_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamError("FileError", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StreamError("FileError", "cannot open " + path);
  out << text;
}

void emit_stream(const EventStream& s, const std::string& out_path) {
  if (out_path.empty())
    std::cout << serialize_stream(s);
  else
    write_file(out_path, serialize_stream(s));
}

std::vector<Time> parse_delta_list(const std::string& text) {
  std::vector<Time> deltas;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    std::string tok = text.substr(start, comma - start);
    if (tok.empty()) throw StreamError("BadDelta", "empty delta in list");
    deltas.push_back(detail::parse_int<Time>(tok, 0, "delta"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (deltas.empty()) throw StreamError("BadDelta", "delta list is empty");
  return deltas;
}

// Applies key=value config entries to options the command line left unset.
class ConfigOverlay {
 public:
  explicit ConfigOverlay(const std::string& path) {
    if (!path.empty()) values_ = parse_kv_config(read_file(path));
  }

  template <class T>
  void fill(const CLI::Option* opt, const char* key, T& target) const {
    auto it = values_.find(key);
    if (it == values_.end() || opt->count() > 0) return;
    std::istringstream in(it->second);
    in >> target;
    if (in.fail())
      throw StreamError("MalformedConfig",
                        std::string("bad value for ") + key);
  }

 private:
  std::map<std::string, std::string> values_;
};

int cmd_reach(const std::string& input, const std::string& delta_list,
              int workers, bool verify, const std::string& out_dir) {
  EventStream g = read_stream_file(input);
  std::vector<Time> deltas = parse_delta_list(delta_list);
  ReachStats stats;
  std::map<Time, ReachBounds> bounds = reach_delays(g, deltas, workers, &stats);

  fs::create_directories(out_dir.empty() ? "." : out_dir);
  fs::path dir = out_dir.empty() ? "." : out_dir;
  for (const auto& [delta, b] : bounds) {
    write_file((dir / ("lower_" + std::to_string(delta) + ".trg")).string(),
               serialize_stream(b.lower));
    write_file((dir / ("upper_" + std::to_string(delta) + ".trg")).string(),
               serialize_stream(b.upper));
  }
  std::string log;
  for (const CompositionRecord& r : stats.records) {
    json rec = {{"d", r.d},
                {"m", r.m},
                {"k", r.k},
                {"events_in", r.events_in},
                {"events_out", r.events_out},
                {"peak_counter_entries", r.peak_counter_entries}};
    log += rec.dump() + "\n";
  }
  write_file((dir / "progress.jsonl").string(), log);

  if (verify) {
    if (g.nodes > 12 || g.horizon > 200) {
      std::cerr << "--verify runs the brute-force oracle; it is limited to "
                   "nodes <= 12 and horizon <= 200\n";
      return kExitUsage;
    }
    std::vector<EventStream> oracle = oracle_trg_multi(g, deltas);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const ReachBounds& b = bounds.at(deltas[i]);
      if (!stream_subset(b.lower, oracle[i]) ||
          !stream_subset(oracle[i], b.upper)) {
        std::cerr << "sandwich violation at delta " << deltas[i] << "\n";
        return kExitVerification;
      }
    }
    std::cerr << "verified: lower <= oracle <= upper for all deltas\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal reachability graph toolkit"};
  app.require_subcommand(1);

  // import
  auto* import_cmd = app.add_subcommand("import", "build a contact stream from CSV intervals");
  std::string import_csv, import_out;
  Time import_eta = 1, import_tau = 1, import_horizon = -1;
  VertexId import_nodes = 0;
  import_cmd->add_option("csv", import_csv, "CSV file (u,v,up,down)")->required();
  import_cmd->add_option("--eta", import_eta, "resolution");
  import_cmd->add_option("--tau", import_tau, "traversal time, units of eta");
  import_cmd->add_option("--nodes", import_nodes, "vertex count")->required();
  import_cmd->add_option("--horizon", import_horizon, "horizon override");
  import_cmd->add_option("-o,--out", import_out, "output stream file");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "generate a synthetic contact stream");
  std::string gen_kind, gen_config, gen_out;
  VertexId gen_nodes = 20;
  Time gen_duration = 3600, gen_eta = 1, gen_tau = 1;
  std::uint64_t gen_seed = 0;
  double gen_width = 1000, gen_height = 500, gen_speed_min = 3,
         gen_speed_max = 7, gen_range = 20, gen_pause = 0;
  Time gen_beacon = 1, gen_warmup = 1000;
  double gen_up_rate = 0.2, gen_down_rate = 0.3;
  gen_cmd->add_option("kind", gen_kind, "rwp|markov")->required();
  gen_cmd->add_option("--config", gen_config, "key=value config file");
  auto* o_nodes = gen_cmd->add_option("--nodes", gen_nodes);
  auto* o_width = gen_cmd->add_option("--width", gen_width);
  auto* o_height = gen_cmd->add_option("--height", gen_height);
  auto* o_speed_min = gen_cmd->add_option("--speed-min", gen_speed_min);
  auto* o_speed_max = gen_cmd->add_option("--speed-max", gen_speed_max);
  auto* o_range = gen_cmd->add_option("--range", gen_range);
  auto* o_beacon = gen_cmd->add_option("--beacon-period", gen_beacon);
  auto* o_duration = gen_cmd->add_option("--duration", gen_duration);
  auto* o_warmup = gen_cmd->add_option("--warmup", gen_warmup);
  auto* o_pause = gen_cmd->add_option("--pause", gen_pause);
  auto* o_up_rate = gen_cmd->add_option("--up-rate", gen_up_rate);
  auto* o_down_rate = gen_cmd->add_option("--down-rate", gen_down_rate);
  auto* o_eta = gen_cmd->add_option("--eta", gen_eta);
  auto* o_tau = gen_cmd->add_option("--tau", gen_tau);
  auto* o_seed = gen_cmd->add_option("--seed", gen_seed);
  gen_cmd->add_option("-o,--out", gen_out, "output stream file");

  // reach
  auto* reach_cmd = app.add_subcommand("reach", "lower/upper reachability bounds per delta");
  std::string reach_input, reach_deltas, reach_out_dir;
  int reach_workers = 1;
  bool reach_verify = false;
  reach_cmd->add_option("stream", reach_input, "contact stream file")->required();
  reach_cmd->add_option("--delta", reach_deltas, "comma-separated delay list")->required();
  reach_cmd->add_option("--workers", reach_workers, "parallel member workers")
      ->check(CLI::PositiveNumber);
  reach_cmd->add_flag("--verify", reach_verify, "cross-check against the oracle (small inputs)");
  reach_cmd->add_option("--out-dir", reach_out_dir, "output directory");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "per-epoch metrics CSV plus averages");
  std::string metrics_input, metrics_out;
  metrics_cmd->add_option("stream", metrics_input, "reach stream file")->required();
  metrics_cmd->add_option("-o,--out", metrics_out, "output file");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact reachability graph (brute force)");
  std::string oracle_input, oracle_out;
  Time oracle_delta = 0;
  oracle_cmd->add_option("stream", oracle_input, "contact stream file")->required();
  oracle_cmd->add_option("--delta", oracle_delta, "maximum delay")->required();
  oracle_cmd->add_option("-o,--out", oracle_out, "output stream file");

  // snapshot
  auto* snap_cmd = app.add_subcommand("snapshot", "arc/edge list at a sample point");
  std::string snap_input, snap_time;
  snap_cmd->add_option("stream", snap_input, "stream file")->required();
  snap_cmd->add_option("--t", snap_time, "integer or half-integer time")->required();

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check stream invariants");
  std::string validate_input;
  validate_cmd->add_option("stream", validate_input, "stream file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*import_cmd) {
      auto intervals = parse_interval_csv(read_file(import_csv));
      EventStream s = import_contact_trace(intervals, import_eta, import_tau,
                                           import_nodes, import_horizon);
      emit_stream(s, import_out);
      return kExitOk;
    }
    if (*gen_cmd) {
      ConfigOverlay overlay(gen_config);
      overlay.fill(o_nodes, "nodes", gen_nodes);
      overlay.fill(o_duration, "duration", gen_duration);
      overlay.fill(o_eta, "eta", gen_eta);
      overlay.fill(o_tau, "tau", gen_tau);
      overlay.fill(o_seed, "seed", gen_seed);
      EventStream s;
      if (gen_kind == "rwp") {
        overlay.fill(o_width, "width", gen_width);
        overlay.fill(o_height, "height", gen_height);
        overlay.fill(o_speed_min, "speed_min", gen_speed_min);
        overlay.fill(o_speed_max, "speed_max", gen_speed_max);
        overlay.fill(o_range, "range", gen_range);
        overlay.fill(o_beacon, "beacon_period", gen_beacon);
        overlay.fill(o_warmup, "warmup", gen_warmup);
        overlay.fill(o_pause, "pause", gen_pause);
        RwpConfig cfg{gen_nodes, gen_width, gen_height, gen_speed_min,
                      gen_speed_max, gen_range, gen_beacon, gen_duration,
                      gen_warmup, gen_pause, gen_eta, gen_tau, gen_seed};
        s = generate_rwp(cfg);
      } else if (gen_kind == "markov") {
        overlay.fill(o_up_rate, "up_rate", gen_up_rate);
        overlay.fill(o_down_rate, "down_rate", gen_down_rate);
        MarkovEdgeConfig cfg{gen_nodes, gen_up_rate, gen_down_rate,
                             gen_duration, gen_eta, gen_tau, gen_seed};
        s = generate_markov(cfg);
      } else {
        std::cerr << "unknown generator kind: " << gen_kind << "\n";
        return kExitUsage;
      }
      emit_stream(s, gen_out);
      return kExitOk;
    }
    if (*reach_cmd)
      return cmd_reach(reach_input, reach_deltas, reach_workers, reach_verify,
                       reach_out_dir);
    if (*metrics_cmd) {
      EventStream r = read_stream_file(metrics_input);
      MetricsSeries series = compute_metrics(r);
      json averages = {{"avg_density", series.averages.density},
                       {"avg_asymmetry", series.averages.asymmetry},
                       {"avg_ds_size", series.averages.ds_size}};
      std::string text = metrics_csv(series) + averages.dump() + "\n";
      if (metrics_out.empty())
        std::cout << text;
      else
        write_file(metrics_out, text);
      return kExitOk;
    }
    if (*oracle_cmd) {
      EventStream g = read_stream_file(oracle_input);
      emit_stream(oracle_trg(g, oracle_delta), oracle_out);
      return kExitOk;
    }
    if (*snap_cmd) {
      EventStream s = read_stream_file(snap_input);
      Snapshot snap = snapshot_at(s, parse_sample_point(snap_time));
      for (const auto& [u, v] : snap.arcs)
        std::cout << u << " " << v << "\n";
      return kExitOk;
    }
    if (*validate_cmd) {
      EventStream s = read_stream_file(validate_input);
      RegularityReport report = validate_regularity(s);
      if (report.ok()) {
        std::cout << "ok\n";
        return kExitOk;
      }
      for (const Violation& v : report.violations)
        std::cout << v.rule << " t=" << v.t << " pair=(" << v.u << "," << v.v
                  << ")\n";
      return kExitValidation;
    }
  } catch (const StreamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
