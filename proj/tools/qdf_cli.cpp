// Command-line front door for the qdf library: parse table and block files,
// dispatch verifications, constructions, developments, enumerations and
// searches, and emit line-oriented (or --json) reports.
//
// Exit codes: 0 ok, 1 a verified property failed (with witness), 2 bad input.

#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdf/qdf.hpp"

namespace {

using nlohmann::json;

bool g_json = false;

bool color_enabled() {
  const char* env = std::getenv("QDF_COLOR");
  if (env && std::string(env) == "0") return false;
  return isatty(1);
}

std::string status_word(const std::string& s) {
  if (!color_enabled()) return s;
  if (s == "ok") return "\033[32m" + s + "\033[0m";
  return "\033[31m" + s + "\033[0m";
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return qdf::io::read_file(path);
}

json table_to_json(const qdf::CayleyTable& t) {
  json rows = json::array();
  for (int a = 0; a < t.order(); ++a) {
    json row = json::array();
    for (int b = 0; b < t.order(); ++b) row.push_back(t.at(a, b));
    rows.push_back(std::move(row));
  }
  return rows;
}

json violations_to_json(const qdf::ViolationList& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    json item;
    item["kind"] = qdf::Violation::kind_name(v.kind);
    item["witness"] = std::vector<int>(v.witness.begin(),
                                       v.witness.begin() + std::min(v.arity, 4));
    if (!v.note.empty()) item["note"] = v.note;
    out.push_back(std::move(item));
  }
  return out;
}

void emit_json(json j) { std::cout << j.dump(2) << "\n"; }

int report_violations(const std::string& verb, const qdf::ViolationList& vs) {
  if (g_json) {
    json j{{"verb", verb}, {"status", "violation"},
           {"violations", violations_to_json(vs)}};
    emit_json(std::move(j));
  } else {
    for (const auto& v : vs)
      std::cout << status_word("violation") << " " << v.describe() << "\n";
  }
  return 1;
}

qdf::BlockFamily load_family(const std::string& path, int order) {
  return qdf::BlockFamily(order, qdf::io::parse_blocks(read_input(path)));
}

// A table file holds one table; a DFBQ file holds add % sub. verify-qdf and
// friends accept either: a plain table is treated as the classical group
// case (group, subtraction quasigroup).
qdf::Dfbq load_dfbq(const std::string& path) {
  const std::string text = read_input(path);
  if (qdf::io::looks_like_dfbq_file(text)) {
    auto [add, sub] = qdf::io::parse_dfbq_tables(text);
    auto check = qdf::verify_dfbq(add, sub);
    if (!check.ok()) {
      std::string msg = "input is not a DFBQ:";
      for (const auto& v : check.violations) msg += " " + v.describe();
      throw qdf::bad_parameters(msg);
    }
    return *check.dfbq;
  }
  qdf::CayleyTable t = qdf::io::parse_table(text);
  auto cls = qdf::classify(t);
  if (cls.kind != qdf::AlgebraClass::Kind::Group)
    throw qdf::bad_parameters(
        "plain table input must be a group (use a DFBQ file with a '%' "
        "separator otherwise)");
  auto check = qdf::verify_dfbq(t, qdf::subtraction_quasigroup(t));
  return *check.dfbq;
}

int run_classify(const std::string& file) {
  qdf::CayleyTable t = qdf::io::parse_table(read_input(file));
  auto cls = qdf::classify(t);
  if (g_json) {
    json j{{"verb", "classify"}, {"status", "ok"}, {"class", cls.name()},
           {"order", t.order()}};
    if (cls.identity) j["identity"] = *cls.identity;
    emit_json(std::move(j));
  } else {
    std::cout << status_word("ok") << " " << cls.name();
    if (cls.identity) std::cout << " identity=" << *cls.identity;
    std::cout << "\n";
  }
  return 0;
}

int run_verify_dfbq(const std::string& file) {
  auto [add, sub] = qdf::io::parse_dfbq_tables(read_input(file));
  auto check = qdf::verify_dfbq(add, sub);
  if (!check.ok()) return report_violations("verify-dfbq", check.violations);
  if (g_json) {
    emit_json(json{{"verb", "verify-dfbq"}, {"status", "ok"},
                   {"order", check.dfbq->order()}, {"o", check.dfbq->o},
                   {"e", check.dfbq->e}});
  } else {
    std::cout << status_word("ok") << " o=" << check.dfbq->o
              << " e=" << check.dfbq->e << "\n";
  }
  return 0;
}

int run_decompose(const std::string& file) {
  auto [add, sub] = qdf::io::parse_dfbq_tables(read_input(file));
  auto check = qdf::verify_dfbq(add, sub);
  if (!check.ok()) return report_violations("decompose", check.violations);
  qdf::Decomposition dec;
  try {
    dec = qdf::general_decompose(*check.dfbq);
  } catch (const qdf::op_error& ex) {
    return report_violations("decompose", {ex.violation});
  }
  if (g_json) {
    emit_json(json{{"verb", "decompose"},
                   {"status", "ok"},
                   {"group", table_to_json(dec.group.table)},
                   {"identity", dec.group.identity},
                   {"inv", dec.group.inv.images()},
                   {"alpha", dec.alpha.images()},
                   {"beta", dec.beta.images()},
                   {"o", check.dfbq->o},
                   {"e", check.dfbq->e}});
  } else {
    std::cout << qdf::io::format_table(dec.group.table) << "%\n"
              << "identity: " << dec.group.identity << "\n"
              << "inv: " << qdf::io::format_permutation(dec.group.inv) << "\n"
              << "alpha: " << qdf::io::format_permutation(dec.alpha) << "\n"
              << "beta: " << qdf::io::format_permutation(dec.beta) << "\n";
  }
  return 0;
}

int run_construct(const std::string& group_file, const std::string& alpha_s,
                  const std::string& beta_s) {
  qdf::CayleyTable gt = qdf::io::parse_table(read_input(group_file));
  qdf::GroupPresentation g = qdf::GroupPresentation::from_table(gt);
  qdf::Permutation alpha = alpha_s.empty()
                               ? qdf::Permutation::identity(g.order())
                               : qdf::io::parse_permutation(alpha_s);
  qdf::Permutation beta = beta_s.empty()
                              ? qdf::Permutation::identity(g.order())
                              : qdf::io::parse_permutation(beta_s);
  qdf::Dfbq d = qdf::general_construct(g, alpha, beta);
  if (g_json) {
    emit_json(json{{"verb", "construct"}, {"status", "ok"},
                   {"add", table_to_json(d.add)}, {"sub", table_to_json(d.sub)},
                   {"o", d.o}, {"e", d.e}});
  } else {
    std::cout << qdf::io::format_dfbq_tables(d.add, d.sub);
  }
  return 0;
}

int run_develop(const std::string& table_file, const std::string& blocks_file) {
  qdf::CayleyTable add = qdf::io::parse_table(read_input(table_file));
  if (!qdf::is_latin(add))
    throw qdf::bad_parameters("development needs a quasigroup table");
  qdf::BlockFamily fam = load_family(blocks_file, add.order());
  qdf::Design dsg = qdf::develop(fam, add);
  auto check = qdf::is_2design(dsg);
  const qdf::DesignCertificate* cert =
      check.ok() ? &*check.certificate : nullptr;
  if (g_json) {
    json blocks = json::array();
    for (const auto& [b, m] : dsg.blocks)
      blocks.push_back(json{{"block", b.elems}, {"multiplicity", m}});
    json j{{"verb", "develop"}, {"status", "ok"}, {"v", dsg.points},
           {"b", dsg.distinct_blocks()}, {"blocks", std::move(blocks)}};
    if (cert) {
      j["k"] = cert->k;
      j["lambda"] = cert->lambda;
    }
    emit_json(std::move(j));
  } else {
    std::cout << qdf::io::format_design(dsg, cert);
  }
  return 0;
}

int run_check_design(int points, const std::string& blocks_file) {
  auto blocks = qdf::io::parse_blocks(read_input(blocks_file));
  auto check = qdf::is_2design(points, blocks);
  if (!check.ok()) return report_violations("check-design", check.violations);
  if (g_json) {
    emit_json(json{{"verb", "check-design"}, {"status", "ok"},
                   {"v", points}, {"b", blocks.size()},
                   {"k", check.certificate->k},
                   {"lambda", check.certificate->lambda}});
  } else {
    std::cout << status_word("ok") << " k=" << check.certificate->k
              << " lambda=" << check.certificate->lambda << "\n";
  }
  return 0;
}

int run_verify_qdf(const std::string& algebra_file,
                   const std::string& blocks_file) {
  qdf::Dfbq d = load_dfbq(algebra_file);
  qdf::BlockFamily fam = load_family(blocks_file, d.order());
  auto check = qdf::verify_qdf(d, fam);
  if (!check.ok()) return report_violations("verify-qdf", check.violations);
  if (g_json) {
    json per;
    for (const auto& [diff, cnt] : check.certificate->per_difference)
      per[std::to_string(diff)] = cnt;
    emit_json(json{{"verb", "verify-qdf"}, {"status", "ok"},
                   {"k", check.certificate->k},
                   {"lambda", check.certificate->lambda},
                   {"lambda_range", "differences representable with a != b"},
                   {"per_difference", std::move(per)}});
  } else {
    std::cout << status_word("ok") << " k=" << check.certificate->k
              << " lambda=" << check.certificate->lambda << "\n";
  }
  return 0;
}

int run_dev_equality(const std::string& algebra_file,
                     const std::string& blocks_file) {
  qdf::Dfbq d = load_dfbq(algebra_file);
  qdf::BlockFamily fam = load_family(blocks_file, d.order());
  std::optional<qdf::Block> mismatch;
  try {
    mismatch = qdf::dev_equality(d, fam);
  } catch (const qdf::op_error& ex) {
    return report_violations("dev-equality", {ex.violation});
  }
  if (mismatch) {
    if (g_json) {
      emit_json(json{{"verb", "dev-equality"}, {"status", "violation"},
                     {"mismatching_block", mismatch->elems}});
    } else {
      std::cout << status_word("violation") << " mismatching block: "
                << qdf::io::format_block(*mismatch) << "\n";
    }
    return 1;
  }
  if (g_json) {
    emit_json(json{{"verb", "dev-equality"}, {"status", "ok"},
                   {"equal", true}});
  } else {
    std::cout << status_word("ok") << " true\n";
  }
  return 0;
}

int run_enumerate(const std::string& what, int order, const std::string& mode,
                  int jobs) {
  qdf::EnumerationReport rep;
  if (what == "latin") {
    rep = qdf::enumerate_latin_count(order, jobs);
  } else if (what == "dfbq") {
    if (mode != "brute" && mode != "constructive")
      throw qdf::bad_parameters("--mode must be brute or constructive");
    auto m = mode == "constructive" ? qdf::DfbqEnumMode::constructive
                                    : qdf::DfbqEnumMode::brute;
    rep = qdf::enumerate_dfbq_count(order, m, jobs);
  } else {
    throw qdf::bad_parameters("--what must be latin or dfbq");
  }
  if (g_json) {
    char cs[32];
    std::snprintf(cs, sizeof(cs), "%016llx",
                  static_cast<unsigned long long>(rep.checksum));
    emit_json(json{{"verb", "enumerate"}, {"status", "ok"},
                   {"order", rep.order}, {"mode", rep.mode},
                   {"count", rep.count}, {"checksum", cs},
                   {"elapsed_ms", rep.elapsed_ms}, {"notes", rep.notes}});
  } else {
    std::cout << rep.to_line() << "\n";
    for (const auto& n : rep.notes) std::cout << n << "\n";
  }
  return 0;
}

int run_structure_check(int order, uint64_t seed) {
  qdf::StructureCheckReport rep = qdf::exhaustive_structure_check(order, seed);
  if (g_json) {
    json j{{"verb", "structure-check"},
           {"status", rep.ok() ? "ok" : "violation"},
           {"order", rep.order}, {"total", rep.total},
           {"passed", rep.passed}, {"elapsed_ms", rep.elapsed_ms}};
    if (!rep.first_failure.empty()) j["first_failure"] = rep.first_failure;
    emit_json(std::move(j));
  } else {
    std::cout << status_word(rep.ok() ? "ok" : "violation") << " "
              << rep.summary() << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int run_search_df(const std::string& algebra_file, int k, int lambda,
                  int max_blocks, const std::string& dedup) {
  qdf::Dfbq d = load_dfbq(algebra_file);
  if (dedup != "none" && dedup != "by-development")
    throw qdf::bad_parameters("--dedup must be none or by-development");
  qdf::SearchParams params;
  params.k = k;
  params.lambda = lambda;
  params.max_blocks = max_blocks;
  params.dedup = dedup == "by-development"
                     ? qdf::SearchParams::Dedup::by_development
                     : qdf::SearchParams::Dedup::none;
  auto res = qdf::find_difference_families(d, params);
  if (g_json) {
    json fams = json::array();
    for (const auto& f : res.families) {
      json blocks = json::array();
      for (const auto& b : f.blocks) blocks.push_back(b.elems);
      fams.push_back(std::move(blocks));
    }
    json j{{"verb", "search-df"}, {"status", "ok"},
           {"found", res.families.size()}, {"families", std::move(fams)}};
    if (!res.feasible()) j["infeasible_reason"] = res.infeasible_reason;
    emit_json(std::move(j));
  } else {
    if (!res.feasible())
      std::cout << "infeasible: " << res.infeasible_reason << "\n";
    for (const auto& f : res.families)
      std::cout << qdf::io::format_family(f) << "\n";
    std::cout << "found=" << res.families.size() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for quasigroups, difference families and 2-designs"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "emit structured JSON instead of text");

  std::string file, blocks_file, alpha_s, beta_s, what = "latin",
              mode = "brute", dedup = "none";
  int order = 0, points = 0, jobs = 1, k = 2, lambda = 1, max_blocks = 1;
  uint64_t seed = 0;

  auto* c_classify = app.add_subcommand("classify", "classify a Cayley table");
  c_classify->add_option("table", file, "table file ('-' for stdin)")->required();

  auto* c_vdfbq = app.add_subcommand("verify-dfbq", "check the DFBQ axioms");
  c_vdfbq->add_option("dfbq", file, "DFBQ file (add % sub)")->required();

  auto* c_dec = app.add_subcommand(
      "decompose", "decompose a DFBQ into (group, alpha, beta)");
  c_dec->add_option("dfbq", file, "DFBQ file")->required();

  auto* c_con = app.add_subcommand(
      "construct", "build a DFBQ from a group and permutations");
  c_con->add_option("group", file, "group table file")->required();
  c_con->add_option("--alpha", alpha_s, "alpha images, e.g. '0 2 1' (default identity)");
  c_con->add_option("--beta", beta_s, "beta images (default identity)");

  auto* c_dev = app.add_subcommand("develop", "develop base blocks through a table");
  c_dev->add_option("table", file, "quasigroup table file")->required();
  c_dev->add_option("blocks", blocks_file, "blocks file")->required();

  auto* c_chk = app.add_subcommand("check-design", "verify the 2-design property");
  c_chk->add_option("--points", points, "number of points v")->required();
  c_chk->add_option("blocks", blocks_file, "blocks file")->required();

  auto* c_vqdf = app.add_subcommand("verify-qdf", "check the difference-family conditions");
  c_vqdf->add_option("algebra", file, "group table or DFBQ file")->required();
  c_vqdf->add_option("blocks", blocks_file, "blocks file")->required();

  auto* c_deq = app.add_subcommand(
      "dev-equality", "compare quasigroup and group developments");
  c_deq->add_option("algebra", file, "group table or DFBQ file")->required();
  c_deq->add_option("blocks", blocks_file, "blocks file")->required();

  auto* c_enum = app.add_subcommand("enumerate", "enumerate Latin squares or DFBQs");
  c_enum->add_option("--what", what, "latin | dfbq")->required();
  c_enum->add_option("--order", order, "order n")->required();
  c_enum->add_option("--mode", mode, "dfbq mode: brute | constructive");
  c_enum->add_option("--jobs", jobs, "parallel workers (default 1, sequential)");

  auto* c_sc = app.add_subcommand(
      "structure-check", "exhaustive structure-theorem verification");
  c_sc->add_option("--order", order, "order n")->required();
  c_sc->add_option("--seed", seed, "seed for the random block battery");

  auto* c_df = app.add_subcommand("search-df", "search for difference families");
  c_df->add_option("algebra", file, "group table or DFBQ file")->required();
  c_df->add_option("--k", k, "block size")->required();
  c_df->add_option("--lambda", lambda, "target lambda")->required();
  c_df->add_option("--max-blocks", max_blocks, "family size bound")->required();
  c_df->add_option("--dedup", dedup, "none | by-development");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_classify) return run_classify(file);
    if (*c_vdfbq) return run_verify_dfbq(file);
    if (*c_dec) return run_decompose(file);
    if (*c_con) return run_construct(file, alpha_s, beta_s);
    if (*c_dev) return run_develop(file, blocks_file);
    if (*c_chk) return run_check_design(points, blocks_file);
    if (*c_vqdf) return run_verify_qdf(file, blocks_file);
    if (*c_deq) return run_dev_equality(file, blocks_file);
    if (*c_enum) return run_enumerate(what, order, mode, jobs);
    if (*c_sc) return run_structure_check(order, seed);
    if (*c_df) return run_search_df(file, k, lambda, max_blocks, dedup);
  } catch (const std::exception& ex) {
    if (g_json) {
      emit_json(json{{"status", "error"}, {"message", ex.what()}});
    } else {
      std::cerr << status_word("error") << " " << ex.what() << "\n";
    }
    return 2;
  }
  return 2;
}
