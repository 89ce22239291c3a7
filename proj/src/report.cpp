#include "fgm/report.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "fgm/structure.hpp"

namespace fgm {

using nlohmann::json;

const std::vector<std::string>& all_tasks() {
  static const std::vector<std::string> t{"group_laws",      "torsion_structure", "cohomology_roundtrip",
                                          "quotient_dim_L",  "quotient_dim_M",    "inclusion_kernel",
                                          "height_bound",    "orbit_independence", "generation",
                                          "presentation"};
  return t;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigParseError, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) config_error(path, "missing field '" + key + "'");
  return j.at(key);
}

i64 as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_error(path, "expected an integer");
  return j.get<i64>();
}

std::vector<i64> as_coeff(const json& j, const std::string& path) {
  if (j.is_number_integer()) return {j.get<i64>()};
  if (!j.is_array() || j.empty()) config_error(path, "expected an integer or a non-empty coordinate vector");
  std::vector<i64> v;
  for (size_t i = 0; i < j.size(); ++i) v.push_back(as_int(j[i], path + "/" + std::to_string(i)));
  return v;
}

StepSpec parse_step(const json& j, const std::string& path) {
  const std::string kind = need(j, "kind", path).is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "eisenstein") {
    const json& c = need(j, "coeffs", path);
    if (!c.is_array() || c.empty()) config_error(path + "/coeffs", "expected a non-empty array");
    std::vector<std::vector<i64>> coeffs;
    for (size_t i = 0; i < c.size(); ++i) coeffs.push_back(as_coeff(c[i], path + "/coeffs/" + std::to_string(i)));
    return StepSpec::eisenstein(coeffs);
  }
  if (kind == "unramified") {
    StepSpec s = StepSpec::unramified(static_cast<int>(as_int(need(j, "degree", path), path + "/degree")));
    if (s.degree < 1) config_error(path + "/degree", "degree must be positive");
    if (j.contains("coeffs")) {
      const json& c = j.at("coeffs");
      if (!c.is_array() || static_cast<int>(c.size()) != s.degree)
        config_error(path + "/coeffs", "expected one coefficient per degree");
      for (size_t i = 0; i < c.size(); ++i) s.coeffs.push_back(as_coeff(c[i], path + "/coeffs/" + std::to_string(i)));
    }
    return s;
  }
  config_error(path + "/kind", "expected \"eisenstein\" or \"unramified\"");
}

HondaType make_type(const RunConfig& c) {
  HondaType u;
  u.p = c.p;
  u.pi = c.type_pi[0];
  u.a.push_back(0);
  for (const auto& a : c.type_a) u.a.push_back(a[0]);
  return u;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigParseError, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  if (!j.is_object()) config_error("", "expected an object");
  RunConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) config_error("/name", "expected a string");
    c.name = j["name"].get<std::string>();
  }
  i64 p = as_int(need(j, "p", ""), "/p");
  if (p < 2 || !is_prime(static_cast<u64>(p))) config_error("/p", "p must be prime");
  c.p = static_cast<u64>(p);
  if (j.contains("K0_steps") && !(j["K0_steps"].is_array() && j["K0_steps"].empty()))
    config_error("/K0_steps", "only K0 = Q_p is supported");
  if (j.contains("K_unramified_degree") && as_int(j["K_unramified_degree"], "/K_unramified_degree") != 1)
    config_error("/K_unramified_degree", "only K = K0 is supported");

  const json& ht = need(j, "honda_type", "");
  auto pi = as_coeff(need(ht, "pi", "/honda_type"), "/honda_type/pi");
  if (pi.size() != 1) config_error("/honda_type/pi", "coefficients live in Q_p: one coordinate expected");
  c.type_pi = pi;
  const json& a = need(ht, "a", "/honda_type");
  if (!a.is_array() || a.empty()) config_error("/honda_type/a", "expected a non-empty array");
  for (size_t i = 0; i < a.size(); ++i) {
    auto v = as_coeff(a[i], "/honda_type/a/" + std::to_string(i));
    if (v.size() != 1) config_error("/honda_type/a/" + std::to_string(i), "one coordinate expected");
    c.type_a.push_back(v);
  }
  if (j.contains("logarithm")) {
    if (!j["logarithm"].is_string()) config_error("/logarithm", "expected a string");
    c.logarithm = j["logarithm"].get<std::string>();
    if (c.logarithm != "canonical" && c.logarithm != "multiplicative" && c.logarithm != "lubin_tate_model")
      config_error("/logarithm", "expected canonical, multiplicative or lubin_tate_model");
  }
  try {
    HondaType u = make_type(c);
    validate_type(u);
    height(u);
  } catch (const Error& e) {
    config_error("/honda_type", e.what());
  }

  if (j.contains("L_steps")) {
    const json& s = j["L_steps"];
    if (!s.is_array()) config_error("/L_steps", "expected an array");
    for (size_t i = 0; i < s.size(); ++i) c.L_steps.push_back(parse_step(s[i], "/L_steps/" + std::to_string(i)));
  }
  c.M_unramified_degree = static_cast<int>(as_int(need(j, "M_unramified_degree", ""), "/M_unramified_degree"));
  {
    int d = c.M_unramified_degree;
    if (d < 1) config_error("/M_unramified_degree", "must be positive");
    while (d % static_cast<int>(c.p) == 0) d /= static_cast<int>(c.p);
    if (d != 1) config_error("/M_unramified_degree", "must be a power of p");
  }
  if (j.contains("precision")) c.precision = static_cast<int>(as_int(j["precision"], "/precision"));
  if (c.precision < 4) config_error("/precision", "N must be at least 4");
  if (j.contains("D")) {
    c.D = static_cast<int>(as_int(j["D"], "/D"));
    if (*c.D < 2) config_error("/D", "D must be at least 2");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) config_error("/seed", "expected an integer");
    c.seed = j["seed"].get<u64>();
  }
  if (j.contains("roundtrips")) c.roundtrips = static_cast<int>(as_int(j["roundtrips"], "/roundtrips"));
  const json& t = need(j, "tasks", "");
  if (t.is_string() && t.get<std::string>() == "all") {
    c.tasks = all_tasks();
  } else {
    if (!t.is_array() || t.empty()) config_error("/tasks", "expected \"all\" or a non-empty array");
    std::set<std::string> want;
    for (size_t i = 0; i < t.size(); ++i) {
      if (!t[i].is_string()) config_error("/tasks/" + std::to_string(i), "expected a task name");
      const auto name = t[i].get<std::string>();
      if (std::find(all_tasks().begin(), all_tasks().end(), name) == all_tasks().end())
        config_error("/tasks/" + std::to_string(i), "unknown task '" + name + "'");
      want.insert(name);
    }
    for (const auto& name : all_tasks())
      if (want.count(name)) c.tasks.push_back(name);
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const TaskResult& t) { j = json{{"name", t.name}, {"status", t.status}, {"detail", t.detail}}; }

void from_json(const json& j, TaskResult& t) {
  j.at("name").get_to(t.name);
  j.at("status").get_to(t.status);
  j.at("detail").get_to(t.detail);
}

void to_json(json& j, const InvariantRow& r) {
  j = json{{"level", r.level}, {"computed", r.computed}, {"presented", r.presented}};
}

void from_json(const json& j, InvariantRow& r) {
  j.at("level").get_to(r.level);
  j.at("computed").get_to(r.computed);
  j.at("presented").get_to(r.presented);
}

void to_json(json& j, const Report& r) {
  j = json{{"schema_version", r.schema_version},
           {"name", r.name},
           {"p", r.p},
           {"seed", r.seed},
           {"L", r.L},
           {"M", r.M},
           {"group_type", r.group_type},
           {"logarithm", r.logarithm},
           {"D", r.D},
           {"N", r.N},
           {"guard", r.guard},
           {"hypothesis", r.hypothesis},
           {"s", r.s},
           {"n", r.n},
           {"h", r.h},
           {"m", r.m},
           {"dim_L", r.dim_L},
           {"dim_M", r.dim_M},
           {"kernel_dim", r.kernel_dim},
           {"independence_rank", r.independence_rank},
           {"invariant_factors", r.invariants},
           {"generators",
            json{{"zeta", r.zeta}, {"xi", r.xi}, {"omega", r.omega}, {"epsilon", r.epsilon}, {"theta", r.theta}}},
           {"tasks", r.tasks}};
}

void from_json(const json& j, Report& r) {
  j.at("schema_version").get_to(r.schema_version);
  j.at("name").get_to(r.name);
  j.at("p").get_to(r.p);
  j.at("seed").get_to(r.seed);
  j.at("L").get_to(r.L);
  j.at("M").get_to(r.M);
  j.at("group_type").get_to(r.group_type);
  j.at("logarithm").get_to(r.logarithm);
  j.at("D").get_to(r.D);
  j.at("N").get_to(r.N);
  j.at("guard").get_to(r.guard);
  j.at("hypothesis").get_to(r.hypothesis);
  j.at("s").get_to(r.s);
  j.at("n").get_to(r.n);
  j.at("h").get_to(r.h);
  j.at("m").get_to(r.m);
  j.at("dim_L").get_to(r.dim_L);
  j.at("dim_M").get_to(r.dim_M);
  j.at("kernel_dim").get_to(r.kernel_dim);
  j.at("independence_rank").get_to(r.independence_rank);
  j.at("invariant_factors").get_to(r.invariants);
  const json& g = j.at("generators");
  g.at("zeta").get_to(r.zeta);
  g.at("xi").get_to(r.xi);
  g.at("omega").get_to(r.omega);
  g.at("epsilon").get_to(r.epsilon);
  g.at("theta").get_to(r.theta);
  j.at("tasks").get_to(r.tasks);
}

int Report::exit_code() const {
  bool skipped = false;
  for (const auto& t : tasks) {
    if (t.status == "FAIL") return 3;
    if (t.status == "SKIPPED") skipped = true;
  }
  return skipped ? 2 : 0;
}

std::string emit(const Report& r, const std::string& format) {
  if (format == "json") return json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "run " << r.name << "  p=" << r.p << "  seed=" << r.seed << "\n";
  os << "L = " << r.L << "\nM = " << r.M << "\n";
  os << "type " << r.group_type << " (" << r.logarithm << " logarithm), D=" << r.D << ", N=" << r.N
     << ", guard=" << r.guard << "\n";
  os << "hypothesis " << r.hypothesis << "  s=" << r.s << " n=" << r.n << " h=" << r.h << " m=" << r.m << "\n";
  os << "dim_L=" << r.dim_L << " dim_M=" << r.dim_M << " kernel_dim=" << r.kernel_dim
     << " independence_rank=" << r.independence_rank << "\n";
  for (const auto& row : r.invariants) {
    os << "invariants N'=" << row.level << ":";
    for (int x : row.computed) os << " " << x;
    os << " |";
    for (int x : row.presented) os << " " << x;
    os << "\n";
  }
  os << std::left << std::setw(22) << "TASK" << std::setw(9) << "STATUS" << "DETAIL\n";
  for (const auto& t : r.tasks) os << std::left << std::setw(22) << t.name << std::setw(9) << t.status << t.detail << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Running

namespace {

using Clock = std::chrono::steady_clock;

u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

QSeries1 make_log(const RunConfig& c, const HondaType& u, int D) {
  if (c.logarithm == "multiplicative") return multiplicative_log(D);
  if (c.logarithm == "lubin_tate_model") {
    QSeries1 e(D);
    e[1] = u.pi;
    if (static_cast<u64>(D) >= u.q()) e[static_cast<int>(u.q())] = 1;
    return log_from_endomorphism(e);
  }
  return logarithm_from_type(u, D);
}

std::vector<i64> centered(const FieldElement& x, const FieldTower& M) {
  const u64 pn = M.ring().power(M.precision().N);
  std::vector<i64> out;
  for (u64 c : M.embed(x).key()) out.push_back(c > pn / 2 ? -static_cast<i64>(pn - c) : static_cast<i64>(c));
  return out;
}

class Pipeline {
 public:
  Pipeline(const RunConfig& cfg, Report& rep) : cfg_(cfg), rep_(rep), rng_(cfg.seed) {}

  void build(int D, int guard) {
    Precision prec{cfg_.precision, guard};
    HondaType u = make_type(cfg_);
    L_ = FieldTower::build(cfg_.p, cfg_.L_steps, prec);
    M_ = L_->extend(StepSpec::unramified(cfg_.M_unramified_degree));
    F_ = FormalGroup::from_logarithm(u, make_log(cfg_, u, D), prec);
    mod_ = std::make_unique<FormalModule>(F_, L_, M_);
    rep_.D = D;
    rep_.guard = guard;
    rep_.L = L_->describe();
    rep_.M = M_->describe();
  }

  void setup() {
    HondaType u = make_type(cfg_);
    const int h = height(u);
    int eM = 1;
    for (const auto& s : cfg_.L_steps)
      if (s.kind == StepKind::Eisenstein) eM *= static_cast<int>(s.coeffs.size());
    int guard = 4, D = 0;
    for (int it = 0; it < 6; ++it) {
      D = cfg_.D.value_or(std::max<int>(static_cast<int>(ipow(u.q(), 2 * h)), eM * (cfg_.precision + guard)));
      int g2 = std::max(4, 2 * make_log(cfg_, u, D).denom_bound(u.p));
      if (g2 == guard) break;
      guard = g2;
    }
    rep_.group_type = u.to_string() + " over Q_" + std::to_string(u.p);
    rep_.logarithm = cfg_.logarithm;
    rep_.N = cfg_.precision;
    build(D, guard);
  }

  const HypothesisCheck& hypothesis() {
    if (!hc_) {
      for (int attempt = 0;; ++attempt) {
        try {
          hc_ = std::make_unique<HypothesisCheck>(inspect_hypothesis(*mod_));
          break;
        } catch (const Error& e) {
          // a deeper torsion level needs a longer truncation
          if (e.code() != ErrorCode::TruncationTooShort || attempt >= 3 || cfg_.D) throw;
          build(rep_.D * static_cast<int>(ipow(F_->q(), F_->height())), rep_.guard);
        }
      }
      rep_.hypothesis = hc_->ok ? "ok" : hc_->reason;
      rep_.s = hc_->s;
      rep_.n = hc_->n;
      rep_.h = hc_->h;
      rep_.m = hc_->m_exp;
    }
    return *hc_;
  }

  bool applicable() { return hypothesis().ok; }

  const QuotientSpace& VL() {
    if (!VL_) VL_ = std::make_unique<QuotientSpace>(*mod_, *L_);
    return *VL_;
  }
  const QuotientSpace& VM() {
    if (!VM_) VM_ = std::make_unique<QuotientSpace>(*mod_, *M_);
    return *VM_;
  }

  const QuotientDim& qdim(bool top) {
    auto& slot = top ? qM_ : qL_;
    if (!slot) {
      const auto& hc = hypothesis();
      int expected = top ? hc.n * mod_->order() + hc.h : hc.n + hc.h;
      slot = std::make_unique<QuotientDim>(quotient_dim(*mod_, top ? VM() : VL(), expected, QuotientRoute::Linear));
      (top ? rep_.dim_M : rep_.dim_L) = slot->dim;
    }
    return *slot;
  }

  const InclusionKernel& kernel() {
    if (!kernel_) {
      kernel_ = std::make_unique<InclusionKernel>(inclusion_kernel(*mod_, hypothesis(), VL(), VM()));
      rep_.kernel_dim = kernel_->dim;
    }
    return *kernel_;
  }

  const PresentationReport& presentation() {
    if (!pres_) {
      std::vector<int> levels;
      for (int lv = 2; lv <= std::min(6, cfg_.precision); ++lv) levels.push_back(lv);
      pres_ = std::make_unique<PresentationReport>(build_presentation(*mod_, hypothesis(), VL(), VM(), rng_, levels));
      const auto& pr = *pres_;
      rep_.independence_rank = pr.independence_rank;
      rep_.dim_L = pr.dim_L;
      rep_.dim_M = pr.dim_M;
      rep_.kernel_dim = pr.kernel.dim;
      rep_.invariants.clear();
      for (const auto& c : pr.invariants) rep_.invariants.push_back({c.level, c.computed, c.presented});
      auto dump = [&](const std::vector<FieldElement>& xs, std::vector<std::vector<i64>>& out) {
        out.clear();
        for (const auto& x : xs) out.push_back(centered(x, *M_));
      };
      dump(pr.zeta, rep_.zeta);
      dump(pr.xi, rep_.xi);
      dump(pr.omega, rep_.omega);
      dump(pr.epsilon, rep_.epsilon);
      dump(pr.theta, rep_.theta);
    }
    return *pres_;
  }

  // -- tasks ---------------------------------------------------------------

  TaskResult task(const std::string& name) {
    TaskResult t{name, "PASS", ""};
    auto t0 = Clock::now();
    try {
      static const std::set<std::string> gated{"torsion_structure", "quotient_dim_L", "quotient_dim_M",
                                               "inclusion_kernel",  "height_bound",   "orbit_independence",
                                               "generation",        "presentation"};
      if (gated.count(name) && !applicable()) {
        t.status = "SKIPPED";
        t.detail = hypothesis().reason;
      } else {
        std::string detail;
        bool ok = dispatch(name, detail);
        t.status = ok ? "PASS" : "FAIL";
        t.detail = detail;
      }
    } catch (const Error& e) {
      t.status = "FAIL";
      t.detail = e.what();
    }
    std::cerr << "[fgm] " << rep_.name << " " << name << " " << t.status << " "
              << std::chrono::duration<double>(Clock::now() - t0).count() << "s\n";
    return t;
  }

  bool dispatch(const std::string& name, std::string& detail) {
    if (name == "group_laws") return group_laws(detail);
    if (name == "torsion_structure") return torsion_structure(detail);
    if (name == "cohomology_roundtrip") return roundtrips(detail);
    if (name == "quotient_dim_L" || name == "quotient_dim_M") return quotient(name == "quotient_dim_M", detail);
    if (name == "inclusion_kernel") return inclusion(detail);
    if (name == "height_bound") {
      const auto& hc = hypothesis();
      detail = "h=" + std::to_string(hc.h) + " n=" + std::to_string(hc.n);
      return hc.h <= hc.n;
    }
    if (name == "orbit_independence") return orbits(detail);
    if (name == "generation") return generation(detail);
    if (name == "presentation") return present(detail);
    fail(ErrorCode::ConfigParseError, "unknown task " + name);
  }

  bool group_laws(std::string& detail) {
    const FormalGroup& F = *F_;
    const int D = F.D();
    const auto& law = F.law_exact();
    bool ok = law.integral(F.p()) && verify_type(F.log(), F.type());
    for (int n = 1; n <= D && ok; ++n)
      for (int j = 0; j <= n; ++j) ok &= law.at(n - j, j) == law.at(j, n - j);
    ok &= law.at(1, 0) == 1 && law.at(0, 1) == 1;
    for (int n = 2; n <= D; ++n) ok &= law.at(n, 0) == 0 && law.at(0, n) == 0;
    const std::vector<mpq_class> scalars{2, -1, 3, F.type().pi};
    for (const auto& a : scalars) {
      ok &= series_compose(F.log(), F.endo_exact(a)) == F.log().scaled(a);
      for (const auto& b : scalars) ok &= series_compose(F.endo_exact(a), F.endo_exact(b)) == F.endo_exact(a * b);
    }
    // sums and associativity at random points of M
    std::uniform_int_distribution<u64> d(0, M_->ring().modulus() - 1);
    auto point = [&] {
      std::vector<u64> c(M_->degree());
      for (auto& x : c) x = d(rng_);
      return M_->from_coords(c) * M_->uniformizer();
    };
    const auto& mod = *mod_;
    for (int t = 0; t < 10; ++t) {
      FieldElement x = point(), y = point(), z = point();
      ok &= mod.add(mod.add(x, y), z).equals(mod.add(x, mod.add(y, z)));
      ok &= mod.add(x, y).equals(mod.add(y, x));
      ok &= mod.add(x, mod.neg(x)).is_zero();
      ok &= mod.scalar(5, x).equals(mod.add(mod.scalar(2, x), mod.scalar(3, x)));
    }
    detail = "D=" + std::to_string(D) + ", log of type " + F.type().to_string() + ", integral law, endomorphism laws";
    return ok;
  }

  bool torsion_structure(std::string& detail) {
    const auto& hc = hypothesis();
    const auto& W = hc.torsion_L;
    const u64 expect = ipow(F_->q(), hc.s * hc.h);
    bool ok = W.complete && W.points.size() == expect && hc.torsion_M.points.size() == expect;
    ok &= W.invariants == std::vector<int>(hc.h, hc.s);
    std::set<std::vector<u64>> keys;
    for (const auto& x : W.points) keys.insert(x.key());
    const auto& mod = *mod_;
    for (const auto& x : W.points) {
      for (const auto& y : W.points) ok &= keys.count(mod.add(x, y).key()) > 0;
      ok &= keys.count(mod.neg(x).key()) > 0;
      ok &= keys.count(mod.scalar(2, x).key()) > 0;
      ok &= mod.pi_mul(x, hc.s).is_zero();
    }
    std::ostringstream os;
    os << "|W^" << hc.s << "| = " << W.points.size() << ", structure";
    for (int k : W.invariants) os << " O/pi^" << k;
    detail = os.str();
    return ok;
  }

  bool roundtrips(std::string& detail) {
    const auto& mod = *mod_;
    std::uniform_int_distribution<u64> dl(0, L_->ring().modulus() - 1);
    int norm_ok = 0, cob_ok = 0;
    for (int t = 0; t < cfg_.roundtrips; ++t) {
      std::vector<u64> c(L_->degree());
      for (auto& x : c) x = dl(rng_);
      FieldElement a = mod.up(L_->from_coords(c) * L_->uniformizer());
      if (mod.norm(mod.solve_norm(a)).equals(a)) ++norm_ok;
    }
    for (int t = 0; t < cfg_.roundtrips; ++t) {
      std::vector<u64> c(M_->degree());
      for (auto& x : c) x = dl(rng_);
      FieldElement b = mod.coboundary(M_->from_coords(c) * M_->uniformizer());
      if (mod.coboundary(mod.solve_coboundary(b)).equals(b)) ++cob_ok;
    }
    detail = std::to_string(norm_ok) + "/" + std::to_string(cfg_.roundtrips) + " norm, " + std::to_string(cob_ok) +
             "/" + std::to_string(cfg_.roundtrips) + " coboundary";
    return norm_ok == cfg_.roundtrips && cob_ok == cfg_.roundtrips;
  }

  bool quotient(bool top, std::string& detail) {
    const auto& q = qdim(top);
    const QuotientSpace& V = top ? VM() : VL();
    detail = "dim " + std::to_string(q.dim) + " (expected " + std::to_string(q.expected) + ", linear route";
    bool ok = q.dim == q.expected;
    if (ipow(F_->p(), q.expected) <= 256) {
      auto d = quotient_dim(*mod_, V, q.expected, QuotientRoute::Division);
      ok &= d.dim == q.dim;
      detail += "; division route agrees";
    }
    detail += ")";
    return ok;
  }

  bool inclusion(std::string& detail) {
    const auto& K = kernel();
    const auto& hc = hypothesis();
    bool ok = K.dim == hc.h;
    for (const auto& g : K.kernel) {
      ok &= !mod_->pi_division(mod_->up(g), *M_).empty();
      ok &= mod_->pi_division(g, *L_).empty();
    }
    auto sys = K.kernel;
    sys.insert(sys.end(), hc.torsion_L.basis.begin(), hc.torsion_L.basis.end());
    ok &= VL().rank(sys) == 2 * hc.h;
    detail = "kernel dimension " + std::to_string(K.dim) + " (h = " + std::to_string(hc.h) + ")";
    return ok;
  }

  bool orbits(std::string& detail) {
    const auto& pr = presentation();
    auto xs = pr.xi;
    xs.insert(xs.end(), pr.theta.begin(), pr.theta.end());
    bool ok = orbit_independence(*mod_, VM(), xs);
    detail = std::to_string(xs.size()) + " orbits of size " + std::to_string(mod_->order()) + " independent";
    return ok;
  }

  bool generation(std::string& detail) {
    bool ok = generation_check(*mod_, VL(), qdim(false).witnesses, 2, rng_);
    ok &= generation_check(*mod_, VM(), qdim(true).witnesses, 2, rng_);
    detail = "pi-adic descent of random targets in L and M";
    return ok;
  }

  bool present(std::string& detail) {
    const auto& pr = presentation();
    bool ok = pr.relations_verified && pr.independence_rank == pr.expected_rank && pr.generation_verified &&
              pr.random_relations_ok;
    for (const auto& c : pr.invariants) ok &= c.equal;
    std::ostringstream os;
    os << pr.xi.size() << " (xi, omega) pairs, " << pr.theta.size() << " thetas, rank " << pr.independence_rank << "/"
       << pr.expected_rank << ", invariants equal for N' = 2.." << (pr.invariants.empty() ? 1 : pr.invariants.back().level);
    detail = os.str();
    return ok;
  }

 private:
  const RunConfig& cfg_;
  Report& rep_;
  std::mt19937_64 rng_;
  TowerPtr L_, M_;
  GroupPtr F_;
  std::unique_ptr<FormalModule> mod_;
  std::unique_ptr<HypothesisCheck> hc_;
  std::unique_ptr<QuotientSpace> VL_, VM_;
  std::unique_ptr<QuotientDim> qL_, qM_;
  std::unique_ptr<InclusionKernel> kernel_;
  std::unique_ptr<PresentationReport> pres_;
};

}  // namespace

Report run(const RunConfig& cfg) {
  Report rep;
  rep.name = cfg.name;
  rep.p = cfg.p;
  rep.seed = cfg.seed;
  rep.N = cfg.precision;
  Pipeline pipe(cfg, rep);
  pipe.setup();
  try {
    pipe.hypothesis();
  } catch (const Error& e) {
    rep.hypothesis = std::string("error: ") + e.what();
  }
  for (const auto& name : cfg.tasks) rep.tasks.push_back(pipe.task(name));
  return rep;
}

RunConfig fixture_config(const std::string& name) {
  static const std::map<std::string, std::string> configs{
      {"A1", R"({"name": "A1", "p": 3, "honda_type": {"pi": 3, "a": [-1]}, "logarithm": "multiplicative",
                 "L_steps": [{"kind": "eisenstein", "coeffs": [3, 3]}], "M_unramified_degree": 3,
                 "precision": 12, "tasks": "all", "seed": 1})"},
      {"A2", R"({"name": "A2", "p": 2, "honda_type": {"pi": 2, "a": [-1]}, "logarithm": "lubin_tate_model",
                 "L_steps": [], "M_unramified_degree": 2, "precision": 12, "tasks": "all", "seed": 1})"},
      {"stretch", R"({"name": "stretch", "p": 2, "honda_type": {"pi": 2, "a": [0, -1]}, "logarithm": "canonical",
                      "L_steps": [{"kind": "unramified", "degree": 2}, {"kind": "eisenstein", "coeffs": [2, 0, 0]}],
                      "M_unramified_degree": 2, "precision": 12, "tasks": "all", "seed": 1})"},
      {"no_torsion", R"({"name": "no_torsion", "p": 3, "honda_type": {"pi": 3, "a": [-1]},
                         "logarithm": "multiplicative", "L_steps": [], "M_unramified_degree": 3,
                         "precision": 12, "tasks": "all", "seed": 1})"}};
  auto it = configs.find(name);
  if (it == configs.end()) fail(ErrorCode::ConfigParseError, "unknown fixture " + name);
  return parse_config(it->second);
}

std::string selftest(std::optional<u64> seed, const std::string& format, int& exit_code) {
  exit_code = 0;
  json all = json::array();
  std::string text;
  for (const char* name : {"A1", "A2"}) {
    RunConfig cfg = fixture_config(name);
    if (seed) cfg.seed = *seed;
    Report r = run(cfg);
    exit_code = std::max(exit_code, r.exit_code());
    all.push_back(r);
    text += emit(r, "text") + "\n";
  }
  if (format == "json") return json{{"schema_version", kSchemaVersion}, {"reports", all}}.dump(2) + "\n";
  return text;
}

}  // namespace fgm
