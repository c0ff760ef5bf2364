// qgrass: verify, tabulate and enumerate from the command line.
// Talks to the library only through qgrass.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgrass/qgrass.h"

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

using nlohmann::json;

struct Options {
  std::optional<int> q, n, k, i;
  std::string suite = "all";
  std::optional<std::string> mode;
  std::string format = "text";
  std::string out;
  unsigned workers = 1;
  bool sweep_x = false;
  bool list_covers = false;
};

void add_instance_options(CLI::App* sub, Options& o) {
  sub->add_option("--q", o.q, "field size (prime)")->envname("QGRASS_Q");
  sub->add_option("--n", o.n, "ambient dimension")->envname("QGRASS_N");
  sub->add_option("--k", o.k, "dimension of y")->envname("QGRASS_K");
  sub->add_option("--format", o.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->envname("QGRASS_FORMAT");
  sub->add_option("--out", o.out, "write output here instead of stdout")->envname("QGRASS_OUT");
  sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber)->envname("QGRASS_WORKERS");
}

void add_distance_option(CLI::App* sub, Options& o) {
  sub->add_option("--i", o.i, "distance from x to y (graph suites)")->envname("QGRASS_I");
}

struct ConfigHandle {
  qgrass_config* cfg = nullptr;
  ~ConfigHandle() { qgrass_config_destroy(cfg); }
};

// Returns an error message, or empty on success.
std::string configure(ConfigHandle& h, const Options& o) {
  if (qgrass_config_create(&h.cfg) != QGRASS_OK) return qgrass_last_error();
  qgrass_config_set_q(h.cfg, o.q.value_or(-1));
  qgrass_config_set_n(h.cfg, o.n.value_or(-1));
  qgrass_config_set_k(h.cfg, o.k.value_or(-1));
  qgrass_config_set_i(h.cfg, o.i.value_or(-1));
  qgrass_config_set_sweep_x(h.cfg, o.sweep_x);
  qgrass_config_set_list_covers(h.cfg, o.list_covers);
  if (qgrass_config_set_workers(h.cfg, o.workers) != QGRASS_OK ||
      qgrass_config_set_suite(h.cfg, o.suite.c_str()) != QGRASS_OK ||
      qgrass_config_set_mode(h.cfg, o.mode ? o.mode->c_str() : nullptr) != QGRASS_OK) {
    return qgrass_last_error();
  }
  return {};
}

std::string instance_label(const json& inst) {
  std::ostringstream s;
  s << "(q=" << inst.value("q", 0) << ",n=" << inst.value("n", 0) << ",k=" << inst.value("k", 0);
  if (inst.contains("i")) s << ",i=" << inst["i"].get<int>();
  s << ")";
  return s.str();
}

std::string compact(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string inst_csv(const json& inst) {
  const auto get = [&](const char* key) { return inst.contains(key) ? compact(inst[key]) : std::string(); };
  return get("q") + "," + get("n") + "," + get("k") + "," + get("i") + "," + csv_field(get("x")) + "," +
         csv_field(get("y"));
}

// Single writer for all records of one command.
struct Writer {
  std::ostream& os;
  std::string format;
  std::string command;
  std::size_t records = 0;
  std::size_t failed = 0;
  // tables text mode collects cells before printing
  std::vector<json> cells;

  void header() {
    if (format != "csv") return;
    if (command == "verify") os << "suite,check,q,n,k,i,x,y,expected,actual,pass\n";
    if (command == "tables") os << "table,q,n,k,i,x,y,row,col,closed_form,brute_force,equitable,agree\n";
    if (command == "enumerate") os << "kind,q,n,k,dim,i,j,cover,size,lower,upper\n";
  }

  void record(const json& r, double ms, bool passed) {
    ++records;
    failed += passed ? 0 : 1;
    if (format == "json") {
      os << r.dump() << "\n";
      return;
    }
    if (command == "verify") verify_line(r, ms, passed);
    if (command == "tables") format == "csv" ? table_csv(r) : cells.push_back(r);
    if (command == "enumerate") enumerate_line(r);
  }

  void verify_line(const json& r, double ms, bool passed) {
    if (format == "csv") {
      os << r["suite"].get<std::string>() << "," << csv_field(r["check"].get<std::string>()) << ","
         << inst_csv(r["instance"]) << "," << csv_field(compact(r["expected"])) << ","
         << csv_field(compact(r["actual"])) << "," << (passed ? "PASS" : "FAIL") << "\n";
      return;
    }
    os << (passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(9) << r["suite"].get<std::string>()
       << std::setw(40) << r["check"].get<std::string>() << std::setw(20) << instance_label(r["instance"])
       << "expected=" << compact(r["expected"]) << " actual=" << compact(r["actual"]);
    if (r.contains("columns_checked")) os << " columns=" << r["columns_checked"].get<std::size_t>();
    if (r.contains("sweep")) os << " x_checked=" << r["sweep"]["x_checked"].get<std::size_t>();
    if (r.contains("note")) os << " [" << r["note"].get<std::string>() << "]";
    os << "  " << std::fixed << std::setprecision(1) << ms << " ms\n";
  }

  void table_csv(const json& r) {
    os << r["table"].get<std::string>() << "," << inst_csv(r["instance"]) << "," << r["row"].get<std::string>() << ","
       << r["col"].get<std::string>() << "," << csv_field(compact(r["closed_form"])) << ","
       << csv_field(compact(r["brute_force"])) << "," << r["equitable"].dump() << "," << r["agree"].dump()
       << "\n";
  }

  void enumerate_line(const json& r) {
    const auto get = [&](const char* key) { return r.contains(key) ? compact(r[key]) : std::string(); };
    const std::string kind = r["kind"].get<std::string>();
    if (format == "csv") {
      const json& inst = r["instance"];
      os << kind << "," << inst["q"] << "," << inst["n"] << "," << inst["k"] << "," << get("dim") << "," << get("i")
         << "," << get("j") << "," << get("cover") << "," << (kind == "cover_pairs" ? get("count") : get("size"))
         << "," << get("lower") << "," << get("upper") << "\n";
      return;
    }
    const std::string label = instance_label(r["instance"]);
    if (kind == "dimension") os << label << "  |P_" << get("dim") << "| = " << get("size") << "\n";
    if (kind == "total") os << label << "  total = " << get("size") << "\n";
    if (kind == "stratum") os << label << "  |P_{" << get("i") << "," << get("j") << "}| = " << get("size") << "\n";
    if (kind == "cover_pairs") os << label << "  " << get("cover") << " cover pairs = " << get("count") << "\n";
    if (kind == "cover") {
      os << get("lower") << " < " << get("upper") << "  " << get("cover") << "  " << r["lower_stratum"].dump() << " -> "
         << r["upper_stratum"].dump() << "\n";
    }
  }

  // 5x5 grids: "closed/brute" per cell, '*' marks a disagreement.
  void flush_tables() {
    if (cells.empty()) return;
    const json& inst = cells.front()["instance"];
    os << "instance " << instance_label(inst) << " x=" << inst["x"].get<std::string>()
       << " y=" << inst["y"].get<std::string>() << "\n";
    std::map<std::string, std::vector<const json*>> by_table;
    for (const auto& c : cells) by_table[c["table"].get<std::string>()].push_back(&c);
    for (const char* name : {"structure", "edge_types"}) {
      const auto& list = by_table[name];
      os << "\n" << name << " (closed form / brute force)\n";
      const int width = std::string(name) == "structure" ? 12 : 26;
      os << std::setw(4) << "";
      for (std::size_t c = 0; c < 5 && c < list.size(); ++c) os << std::setw(width) << (*list[c])["col"].get<std::string>();
      os << "\n";
      for (std::size_t r = 0; r * 5 < list.size(); ++r) {
        os << std::left << std::setw(4) << (*list[r * 5])["row"].get<std::string>() << std::right;
        for (std::size_t c = 0; c < 5; ++c) {
          const json& cell = *list[r * 5 + c];
          std::string text = compact(cell["closed_form"]) + "/" + compact(cell["brute_force"]);
          if (!cell["agree"].get<bool>()) text += "*";
          os << std::setw(width) << text;
        }
        os << "\n";
      }
    }
  }
};

int emit_record(const char* text, double ms, int passed, void* user) {
  static_cast<Writer*>(user)->record(json::parse(text), ms, passed != 0);
  return 0;
}

int run_command(const std::string& command, const Options& o) {
  ConfigHandle h;
  if (auto err = configure(h, o); !err.empty()) {
    std::cerr << "qgrass: " << err << "\n";
    return kUsage;
  }
  if (command != "tables" && command != "enumerate" && qgrass_config_validate(h.cfg) != QGRASS_OK) {
    std::cerr << "qgrass: " << qgrass_last_error() << "\n";
    return kUsage;
  }

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "qgrass: cannot open " << o.out << "\n";
      return kUsage;
    }
  }
  Writer w{o.out.empty() ? std::cout : file, o.format, command, 0, 0, {}};
  w.header();

  int ok = 1;
  qgrass_status s = QGRASS_OK;
  if (command == "verify") s = qgrass_verify(h.cfg, emit_record, &w, &ok);
  if (command == "tables") s = qgrass_tables(h.cfg, emit_record, &w, &ok);
  if (command == "enumerate") s = qgrass_enumerate(h.cfg, emit_record, &w);
  if (s == QGRASS_E_INVALID_ARGUMENT) {
    std::cerr << "qgrass: " << qgrass_last_error() << "\n";
    return kUsage;
  }
  if (s != QGRASS_OK) {
    std::cerr << "qgrass: " << qgrass_status_string(s) << ": " << qgrass_last_error() << "\n";
    return kFail;
  }
  if (o.format == "text") {
    if (command == "tables") w.flush_tables();
    if (command != "enumerate") {
      w.os << "\n" << w.records << " checks, " << w.failed << " failed\n";
    }
  }
  w.os.flush();
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of the q-analog operator algebra and Grassmann graph counts"};
  app.set_version_flag("--version", std::string(qgrass_version()));
  app.require_subcommand(1);

  Options o;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_instance_options(verify, o);
  add_distance_option(verify, o);
  verify->add_flag("--sweep-x", o.sweep_x, "repeat graph checks for every x at distance i")->envname("QGRASS_SWEEP_X");
  verify->add_option("--suite", o.suite, "algebra, geometry, graph, entries or all")
      ->check(CLI::IsMember({"algebra", "geometry", "graph", "entries", "all"}))
      ->envname("QGRASS_SUITE");
  verify->add_option("--mode", o.mode, "algebra check mode: full or columns")
      ->check(CLI::IsMember({"full", "columns"}))
      ->envname("QGRASS_MODE");

  auto* tables = app.add_subcommand("tables", "structure-constant and edge-type tables");
  add_instance_options(tables, o);
  add_distance_option(tables, o);

  auto* enumerate = app.add_subcommand("enumerate", "strata sizes and cover counts");
  add_instance_options(enumerate, o);
  enumerate->add_flag("--list-covers", o.list_covers, "also list every cover pair")->envname("QGRASS_LIST_COVERS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const std::string command = verify->parsed() ? "verify" : tables->parsed() ? "tables" : "enumerate";
  return run_command(command, o);
}
