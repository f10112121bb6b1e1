#include "qloops/linkconfig.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qloops {

double SimParams::small_cutoff() const {
  if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (kappa * n);
}

void SimParams::validate() const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("u must lie in [0,1]");
  if (!(n > 0.0)) throw std::invalid_argument("n must be positive");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
}

LinkConfig::LinkConfig(const Domain& d) : edge_min_(d.edge_min()), edges_(d.n_edges()) {}

std::pair<int, std::size_t> LinkConfig::locate(std::size_t index) const {
  if (index >= count_) throw std::out_of_range("link index out of range");
  for (int k = 0; k < n_edges(); ++k) {
    const auto sz = edges_[k].size();
    if (index < sz) return {edge_min_ + k, index};
    index -= sz;
  }
  throw std::out_of_range("link index out of range");
}

Link LinkConfig::at(std::size_t index) const {
  auto [e, pos] = locate(index);
  const auto& el = on_edge(e)[pos];
  return Link{e, el.t, el.kind};
}

std::size_t LinkConfig::global_index(int x_left, std::size_t pos) const {
  std::size_t idx = 0;
  for (int k = 0; k < x_left - edge_min_; ++k) idx += edges_[k].size();
  return idx + pos;
}

std::vector<Link> LinkConfig::links() const {
  std::vector<Link> out;
  out.reserve(count_);
  for (int k = 0; k < n_edges(); ++k)
    for (const auto& el : edges_[k]) out.push_back(Link{edge_min_ + k, el.t, el.kind});
  return out;
}

std::size_t LinkConfig::count_kind(LinkKind kind) const {
  std::size_t c = 0;
  for (const auto& v : edges_)
    for (const auto& el : v) c += (el.kind == kind);
  return c;
}

std::size_t LinkConfig::find(int x_left, double t) const {
  if (!has_edge(x_left)) return npos;
  const auto& v = on_edge(x_left);
  auto it = std::lower_bound(v.begin(), v.end(), t, [](const EdgeLink& a, double s) { return a.t < s; });
  if (it != v.end() && it->t == t) return static_cast<std::size_t>(it - v.begin());
  return npos;
}

std::size_t LinkConfig::insert(const Link& l) {
  if (!has_edge(l.edge)) throw std::invalid_argument("insert: edge outside domain");
  auto& v = on_edge_mut(l.edge);
  auto it = std::lower_bound(v.begin(), v.end(), l.t, [](const EdgeLink& a, double s) { return a.t < s; });
  if (it != v.end() && it->t == l.t) throw std::invalid_argument("insert: duplicate (edge, t)");
  const auto pos = static_cast<std::size_t>(it - v.begin());
  v.insert(it, EdgeLink{l.t, l.kind});
  ++count_;
  return global_index(l.edge, pos);
}

Link LinkConfig::erase(std::size_t index) {
  auto [e, pos] = locate(index);
  auto& v = on_edge_mut(e);
  Link out{e, v[pos].t, v[pos].kind};
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(pos));
  --count_;
  return out;
}

void LinkConfig::flip(std::size_t index) {
  auto [e, pos] = locate(index);
  auto& el = on_edge_mut(e)[pos];
  el.kind = (el.kind == LinkKind::cross) ? LinkKind::bar : LinkKind::cross;
}

LinkConfig sample_base(const Domain& d, double u, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  return sample_base(d, u, rng);
}

LinkConfig sample_base(const Domain& d, double u, Rng& rng) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("u must lie in [0,1]");
  LinkConfig cfg(d);
  std::uniform_real_distribution<double> time(d.t_lo(), d.t_hi());
  for (int e = d.edge_min(); e <= d.edge_max(); ++e) {
    for (LinkKind kind : {LinkKind::cross, LinkKind::bar}) {
      const double rate = (kind == LinkKind::cross) ? u : 1.0 - u;
      if (rate <= 0.0) continue;
      std::poisson_distribution<int> count(rate * d.beta);
      const int k = count(rng);
      for (int i = 0; i < k; ++i) {
        double t = time(rng);
        while (!d.contains_link(e, t) || cfg.find(e, t) != LinkConfig::npos) t = time(rng);
        cfg.insert(Link{e, t, kind});
      }
    }
  }
  return cfg;
}

void validate_move(const LinkConfig& cfg, const Domain& d, const Move& m) {
  if (auto* ins = std::get_if<InsertMove>(&m)) {
    if (!d.contains_link(ins->link.edge, ins->link.t)) throw std::invalid_argument("insert: link outside domain");
    if (cfg.find(ins->link.edge, ins->link.t) != LinkConfig::npos)
      throw std::invalid_argument("insert: duplicate (edge, t)");
  } else if (auto* del = std::get_if<DeleteMove>(&m)) {
    if (del->index >= cfg.size()) throw std::out_of_range("delete: link index out of range");
  } else if (auto* fl = std::get_if<FlipMove>(&m)) {
    if (fl->index >= cfg.size()) throw std::out_of_range("flip: link index out of range");
  }
}

void apply_move_in_place(LinkConfig& cfg, const Domain& d, const Move& m) {
  validate_move(cfg, d, m);
  if (auto* ins = std::get_if<InsertMove>(&m)) cfg.insert(ins->link);
  else if (auto* del = std::get_if<DeleteMove>(&m)) cfg.erase(del->index);
  else if (auto* fl = std::get_if<FlipMove>(&m)) cfg.flip(fl->index);
}

LinkConfig apply_move(const LinkConfig& cfg, const Domain& d, const Move& m) {
  LinkConfig out = cfg;
  apply_move_in_place(out, d, m);
  return out;
}

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

std::string serialize(const LinkConfig& cfg, const Domain& d) {
  std::ostringstream os;
  os << "# loopcfg v1 kind=" << to_string(d.kind) << " L=" << d.L << " beta=" << format_time(d.beta) << "\n";
  for (int e = d.edge_min(); e <= d.edge_max(); ++e)
    for (const auto& el : cfg.on_edge(e))
      os << e << '\t' << format_time(el.t) << '\t' << (el.kind == LinkKind::cross ? 'X' : 'B') << '\n';
  return os.str();
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("loopcfg line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) parse_fail(line, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) parse_fail(line, "bad integer '" + s + "'");
  return v;
}

}  // namespace

ParsedConfig deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  ParsedConfig out;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header) {
      std::istringstream hs(line);
      std::string hash, tag, ver;
      hs >> hash >> tag >> ver;
      if (hash != "#" || tag != "loopcfg" || ver != "v1") parse_fail(lineno, "missing '# loopcfg v1' header");
      std::string kind_s, L_s, beta_s, tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) parse_fail(lineno, "bad header token '" + tok + "'");
        auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "kind") kind_s = val;
        else if (key == "L") L_s = val;
        else if (key == "beta") beta_s = val;
        else parse_fail(lineno, "unknown header key '" + key + "'");
      }
      if (kind_s.empty() || L_s.empty() || beta_s.empty()) parse_fail(lineno, "header needs kind, L and beta");
      try {
        out.domain = make_domain(parse_domain_kind(kind_s), parse_int(L_s, lineno), parse_double(beta_s, lineno));
      } catch (const std::invalid_argument& e) {
        parse_fail(lineno, e.what());
      }
      out.cfg = LinkConfig(out.domain);
      have_header = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ls(line);
    while (std::getline(ls, f, '\t')) fields.push_back(f);
    if (fields.size() != 3) parse_fail(lineno, "expected 3 tab-separated fields");
    const int e = parse_int(fields[0], lineno);
    const double t = parse_double(fields[1], lineno);
    LinkKind kind;
    if (fields[2] == "X") kind = LinkKind::cross;
    else if (fields[2] == "B") kind = LinkKind::bar;
    else parse_fail(lineno, "link type must be X or B");
    if (!out.domain.contains_link(e, t)) parse_fail(lineno, "link outside domain");
    if (out.cfg.find(e, t) != LinkConfig::npos) parse_fail(lineno, "duplicate link");
    out.cfg.insert(Link{e, t, kind});
  }
  if (!have_header) parse_fail(lineno, "empty document");
  return out;
}

}  // namespace qloops
