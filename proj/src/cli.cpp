#include "caplab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "caplab/cohen.hpp"
#include "caplab/knaster.hpp"

namespace caplab {

namespace {

Schedule parse_n_schedule(const std::string& s) {
  if (s == "k+1") return sched_linear(1, 1);
  if (s == "k+2") return sched_linear(1, 2);
  if (s == "2k") return sched_linear(2, 0);
  if (s == "2k+1") return sched_linear(2, 1);
  if (s.find(',') != std::string::npos || (!s.empty() && isdigit(s[0]))) {
    std::vector<uint64_t> vs;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) vs.push_back(std::stoull(tok));
    return sched_list(std::move(vs));
  }
  throw Error(Errc::Usage, "unknown n-schedule: " + s);
}

Schedule parse_r_schedule(const std::string& s) {
  if (s == "diag") return sched_diag();
  if (s == "zero") return sched_const(0);
  if (s.find(',') != std::string::npos || (!s.empty() && isdigit(s[0]))) {
    std::vector<uint64_t> vs;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) vs.push_back(std::stoull(tok));
    return sched_list(std::move(vs));
  }
  throw Error(Errc::Usage, "unknown r-schedule: " + s);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const Report& rep, const std::string& record_path) {
  rep.render_text(std::cout);
  if (!record_path.empty()) {
    std::ofstream out(record_path);
    rep.render_machine(out);
  }
}

int status_of(const Report& rep) { return rep.all_pass() ? 0 : 1; }

PartitionSchedule parse_partition(const std::string& s) {
  if (s.find(',') == std::string::npos) return round_robin(std::stoul(s));
  std::vector<uint32_t> table;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) table.push_back(std::stoul(tok));
  return partition_from_list(std::move(table));
}

std::vector<Goal> parse_goals(const std::string& text) {
  std::vector<Goal> goals;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    Goal g;
    if (kind == "cover") {
      std::string tok;
      ls >> tok;
      g.kind = Goal::Kind::CoverOrdinal;
      g.xi = parse_ordinal(tok);
    } else if (kind == "coverset") {
      g.kind = Goal::Kind::CoverSet;
      std::vector<OrdinalCode> xs;
      std::string tok;
      while (ls >> tok) xs.push_back(parse_ordinal(tok));
      g.A = OrdSet(std::move(xs));
    } else if (kind == "capture") {
      g.kind = Goal::Kind::ForceCapture;
      std::string tok;
      while (ls >> tok) g.targets.push_back(parse_ordinal(tok));
    } else {
      throw Error(Errc::Usage, "unknown goal: " + line);
    }
    goals.push_back(std::move(g));
  }
  return goals;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv) {
  CLI::App app{"capture-lab: finite construction-scheme laboratory"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "build a canonical scheme and write it");
  std::string b_n = "k+1", b_r = "diag", b_out;
  uint32_t b_K = 3;
  build->add_option("--n", b_n, "n-schedule (k+1, k+2, 2k, or a comma list)");
  build->add_option("--r", b_r, "r-schedule (diag, zero, or a comma list)");
  build->add_option("--K", b_K, "level count");
  build->add_option("--out", b_out, "output path")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "check scheme axioms and structure lemmas");
  std::string v_path, v_record;
  verify->add_option("scheme", v_path)->required();
  verify->add_option("--record", v_record, "machine-readable report path");

  // capture
  auto* capture = app.add_subcommand("capture", "search a capture witness");
  std::string c_path, c_family, c_partition, c_record;
  uint32_t c_arity = 0, c_min_level = 0, c_block = 0;
  bool c_full = false, c_any_pieces = false, c_has_block = false;
  capture->add_option("scheme", c_path)->required();
  capture->add_option("--family", c_family, "family file, one set per line")->required();
  capture->add_option("--arity", c_arity, "fixed arity (>= 2)");
  capture->add_flag("--full", c_full, "capture at full level arity");
  capture->add_option("--min-level", c_min_level, "witness level must exceed this");
  capture->add_option("--block", c_block, "restrict levels to this partition block")
      ->each([&](const std::string&) { c_has_block = true; });
  capture->add_option("--partition", c_partition,
                      "partition: block count (round robin) or comma table");
  capture->add_flag("--any-pieces", c_any_pieces, "allow any increasing pieces");
  capture->add_option("--record", c_record);

  // color
  auto* color = app.add_subcommand("color", "build colorings and run the bridge check");
  std::string col_path, col_out, col_record;
  color->add_option("scheme", col_path)->required();
  color->add_option("--out", col_out, "write the table");
  color->add_option("--record", col_record);

  // pn
  auto* pn = app.add_subcommand("pn", "capture-free set checks and amalgamation");
  std::string pn_path, pn_set, pn_record;
  uint32_t pn_n = 1, pn_level = 1, pn_width = 0, pn_scenarios = 0;
  uint64_t pn_seed = 1;
  pn->add_option("scheme", pn_path)->required();
  pn->add_option("--set", pn_set, "candidate set, space separated");
  pn->add_option("--n", pn_n, "forbidden capture arity minus one");
  pn->add_option("--level", pn_level, "level for the standard family");
  pn->add_option("--width", pn_width, "build a standard family of this width");
  pn->add_option("--scenarios", pn_scenarios, "run seeded amalgamation scenarios");
  pn->add_option("--seed", pn_seed);
  pn->add_option("--record", pn_record);

  // force
  auto* force = app.add_subcommand("force", "amalgamate marked conditions into a capture");
  std::string f_path, f_partition, f_record;
  std::vector<std::string> f_targets;
  uint32_t f_min_level = 0, f_block = 0, f_M = 8;
  bool f_full = false, f_has_block = false;
  force->add_option("scheme", f_path)->required();
  force->add_option("--targets", f_targets, "target ordinals (fresh limits)")->required();
  force->add_flag("--full", f_full);
  force->add_option("--min-level", f_min_level);
  force->add_option("--block", f_block)->each([&](const std::string&) { f_has_block = true; });
  force->add_option("--partition", f_partition);
  force->add_option("--M", f_M, "ordinal cap multiplier");
  force->add_option("--record", f_record);

  // generic
  auto* generic = app.add_subcommand("generic", "run a goal schedule along a chain");
  std::string g_path, g_goals, g_record;
  uint32_t g_fuel = 50, g_M = 8;
  generic->add_option("scheme", g_path)->required();
  generic->add_option("--goals", g_goals, "goal file")->required();
  generic->add_option("--fuel", g_fuel);
  generic->add_option("--M", g_M, "ordinal cap multiplier");
  generic->add_option("--record", g_record);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (build->parsed()) {
      TypeSequence ts = generate_type(parse_n_schedule(b_n), parse_r_schedule(b_r), b_K);
      Scheme S = build_scheme(ts, b_K);
      save_scheme(S, b_out);
      std::cout << "built scheme: K=" << S.K << " universe=" << S.universe_size()
                << " members=" << S.member_count() << " fair-roots<" << fair_up_to(ts)
                << '\n';
      return 0;
    }
    if (verify->parsed()) {
      Scheme S = load_scheme(v_path, /*verify=*/false);
      Report rep = verify_axioms(S);
      rep.merge(verify_lemmas(S));
      emit(rep, v_record);
      return status_of(rep);
    }
    if (capture->parsed()) {
      Scheme S = load_scheme(c_path);
      auto fam_sets = parse_family_lines(slurp(c_family));
      auto checked = check_delta_system(fam_sets);
      Report rep;
      if (auto* viol = std::get_if<DeltaViolation>(&checked)) {
        rep.fail("family", "not a Δ-system (" + viol->reason + " at pair " +
                               std::to_string(viol->i) + "," + std::to_string(viol->j) + ")");
        emit(rep, c_record);
        return 1;
      }
      CaptureQuery q;
      if (!c_full) q.arity = c_arity >= 2 ? c_arity : 2;
      q.min_level = c_min_level;
      PartitionSchedule part;
      if (c_has_block) {
        if (c_partition.empty())
          throw Error(Errc::Usage, "--block needs --partition");
        part = parse_partition(c_partition);
        q.partition = &part;
        q.block = c_block;
      }
      q.any_pieces = c_any_pieces;
      CaptureStats stats;
      auto wit = find_capture(S, std::get<DeltaSystemFamily>(checked), q, &stats);
      if (wit) {
        std::ostringstream os;
        os << "level " << wit->level << "; F=" << S.member(wit->F).str()
           << "; indices=";
        for (size_t i = 0; i < wit->indices.size(); ++i)
          os << (i ? "," : "") << wit->indices[i];
        rep.pass("capture", os.str());
      } else {
        rep.fail("capture", "none (levels scanned " +
                                std::to_string(stats.levels_scanned) + ", tuples " +
                                std::to_string(stats.tuples_checked) + ")");
      }
      emit(rep, c_record);
      return status_of(rep);
    }
    if (color->parsed()) {
      Scheme S = load_scheme(col_path);
      ColoringTable ct = build_colorings(S);
      Report rep = verify_colorings(S, ct);
      rep.merge(coloring_capture_bridge(S, ct));
      if (!col_out.empty()) {
        std::ofstream out(col_out);
        out << coloring_to_text(S, ct);
      }
      emit(rep, col_record);
      return status_of(rep);
    }
    if (pn->parsed()) {
      Scheme S = load_scheme(pn_path);
      Report rep;
      if (!pn_set.empty()) {
        FinSet P = parse_fin_set(pn_set);
        auto viol = pn_violation(S, P, pn_n);
        if (!viol) {
          rep.pass("condition", P.str() + " is capture-free at arity " +
                                    std::to_string(pn_n + 1));
        } else {
          std::ostringstream os;
          os << "captured tuple (";
          for (size_t i = 0; i < viol->tuple.size(); ++i)
            os << (i ? "," : "") << viol->tuple[i];
          os << ") by " << S.member(viol->F).str();
          rep.fail("condition", os.str());
        }
        if (pn_width >= 1 && !viol) {
          auto famly = pn_standard_family(S, PnCondition{P, pn_n}, pn_level, pn_width);
          std::ostringstream os;
          for (size_t i = 0; i < famly.size(); ++i)
            os << (i ? " " : "") << famly[i].P.str();
          rep.info("standard-family", os.str());
          auto united = pn_union_check(S, famly, pn_n);
          if (std::holds_alternative<PnCondition>(united))
            rep.pass("union", "width-" + std::to_string(famly.size()) +
                                  " union stays a condition");
          else
            rep.fail("union", "union is captured");
        }
      }
      if (pn_scenarios > 0) {
        std::mt19937_64 rng(pn_seed);
        uint32_t good = 0;
        for (uint32_t i = 0; i < pn_scenarios; ++i) {
          P1Scenario sc = make_p1_scenario(S, rng);
          if (p1_amalgam_check(S, PnCondition{sc.p_a1, 1}, PnCondition{sc.p_b2, 1}, sc))
            ++good;
        }
        if (good == pn_scenarios)
          rep.pass("amalgam", std::to_string(good) + " scenarios amalgamated");
        else
          rep.fail("amalgam", std::to_string(pn_scenarios - good) + " scenarios failed");
      }
      emit(rep, pn_record);
      return status_of(rep);
    }
    if (force->parsed()) {
      Scheme S = load_scheme(f_path);
      std::vector<OrdinalCode> targets;
      for (const auto& t : f_targets) targets.push_back(parse_ordinal(t));
      for (OrdinalCode t : targets)
        if (t.limb >= f_M)
          throw Error(Errc::PreconditionFailed,
                      ord_str(t) + " beyond cap w*" + std::to_string(f_M));
      std::vector<CohenCondition> marked;
      CohenCondition empty;
      for (OrdinalCode t : targets)
        marked.push_back(extend_to_cover(S, empty, t).first);
      StandardizedFamily fam = standardize(S, marked, targets);
      ForceMode mode;
      mode.full = f_full;
      mode.min_level = f_min_level;
      PartitionSchedule part;
      if (f_has_block) {
        if (f_partition.empty()) throw Error(Errc::Usage, "--block needs --partition");
        part = parse_partition(f_partition);
        mode.partition = &part;
        mode.block = f_block;
      }
      ForceResult fr =
          force_capture(S, fam, static_cast<uint32_t>(targets.size()), mode);
      Report rep;
      rep.pass("force", "level " + std::to_string(fr.level) + "; F=" +
                            fr.captured_member.str());
      rep.info("condition", "\n" + condition_to_text(S, fr.q));
      emit(rep, f_record);
      return status_of(rep);
    }
    if (generic->parsed()) {
      Scheme S = load_scheme(g_path);
      GenericRun run = run_generic(S, parse_goals(slurp(g_goals)), g_fuel, g_M);
      Report rep = run.report;
      rep.info("chain", std::to_string(run.chain.size()) + " conditions, fuel used " +
                            std::to_string(run.fuel_used));
      rep.info("fragment", std::to_string(run.fragment.size()) + " induced members");
      emit(rep, g_record);
      return status_of(rep);
    }
  } catch (const Error& e) {
    if (e.code == Errc::Usage) {
      std::cerr << "usage error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace caplab
