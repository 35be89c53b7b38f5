#include "fixtures.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testkit {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Fixture> load_fixtures() {
  std::vector<Fixture> out;
  for (const auto& entry : fs::directory_iterator(HOOKLENS_FIXTURE_DIR)) {
    fs::path expected = entry.path() / "expected.json";
    if (!entry.is_directory() || !fs::exists(expected)) continue;
    std::ifstream in(expected);
    json j = json::parse(in);
    Fixture f;
    f.name = entry.path().filename().string();
    f.root = entry.path() / "project";
    f.description = j.value("description", "");
    for (const auto& e : j.at("findings")) {
      f.expected.push_back({e.at("kind"), e.at("nodes").get<std::vector<std::string>>(),
                            e.value("confidence", std::string("definite"))});
    }
    std::sort(f.expected.begin(), f.expected.end());
    if (j.contains("drilling_by_threshold")) {
      for (const auto& [k, v] : j.at("drilling_by_threshold").items()) f.drilling_by_threshold[std::stoi(k)] = v;
    }
    if (j.contains("diagnostics")) f.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
  return out;
}

const Fixture& fixture(const std::string& name) {
  static const std::vector<Fixture> all = load_fixtures();
  for (const auto& f : all) {
    if (f.name == name) return f;
  }
  throw std::invalid_argument("no fixture " + name);
}

hooklens::AnalysisConfig config_for(const fs::path& root, int drill_threshold) {
  hooklens::AnalysisConfig c;
  c.root_path = root;
  c.drill_threshold = drill_threshold;
  return c;
}

std::string node_label(const hooklens::AnalysisReport& r, const std::string& id) {
  auto find = [&](const std::string& x) -> const hooklens::GraphNode* {
    auto it = std::lower_bound(r.nodes.begin(), r.nodes.end(), x,
                               [](const hooklens::GraphNode& n, const std::string& k) { return n.id < k; });
    return it != r.nodes.end() && it->id == x ? &*it : nullptr;
  };
  const hooklens::GraphNode* n = find(id);
  if (!n) return "?" + id;
  if (n->kind == hooklens::GraphNodeKind::Component) return n->name;
  const hooklens::GraphNode* c = n->parent_component ? find(*n->parent_component) : nullptr;
  std::string owner = c ? c->name : "?";
  switch (n->kind) {
    case hooklens::GraphNodeKind::State: return owner + ".state:" + n->name;
    case hooklens::GraphNodeKind::Prop: return owner + ".prop:" + n->name;
    default: return owner + "." + n->name;
  }
}

std::vector<Labeled> labeled_findings(const hooklens::AnalysisReport& r) {
  std::vector<Labeled> out;
  for (const auto& f : r.findings) {
    Labeled l{std::string(to_string(f.kind)), {}, std::string(to_string(f.confidence))};
    for (const auto& id : f.node_ids) l.nodes.push_back(node_label(r, id));
    out.push_back(std::move(l));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Labeled> from_oracle(const oracle::Result& r) {
  std::vector<Labeled> out;
  for (const auto& f : r.findings) out.push_back({f.kind, f.nodes, f.confidence});
  std::sort(out.begin(), out.end());
  return out;
}

Score score(const std::vector<Labeled>& expected, const std::vector<Labeled>& actual, const std::string& confidence) {
  std::vector<Labeled> e, a;
  std::copy_if(expected.begin(), expected.end(), std::back_inserter(e),
               [&](const Labeled& l) { return l.confidence == confidence; });
  std::copy_if(actual.begin(), actual.end(), std::back_inserter(a),
               [&](const Labeled& l) { return l.confidence == confidence; });
  std::sort(e.begin(), e.end());
  std::sort(a.begin(), a.end());
  std::vector<Labeled> common;
  std::set_intersection(e.begin(), e.end(), a.begin(), a.end(), std::back_inserter(common));
  Score s;
  s.true_pos = static_cast<int>(common.size());
  s.false_pos = static_cast<int>(a.size() - common.size());
  s.false_neg = static_cast<int>(e.size() - common.size());
  return s;
}

std::vector<std::pair<std::string, std::string>> read_sources(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext != ".jsx" && ext != ".js" && ext != ".tsx" && ext != ".ts") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out.emplace_back(fs::relative(entry.path(), root).generic_string(), ss.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- generator

namespace {

struct GenComp {
  std::string name;
  int file = 0;
  bool object_params = false;
  bool rest = false;
  bool relay = false;  // never reads its props, hands them to the next component
  std::vector<std::string> props;         // declared keys
  std::vector<std::string> states;        // value names; setter is "set" + capitalized
  std::vector<std::string> body;          // statements before return
  std::vector<std::string> jsx;           // children of the returned <div>
};

std::string setter_of(const std::string& v) {
  std::string s = v;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return "set" + s;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> random_project(std::mt19937& rng, int max_components) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  auto chance = [&](int pct) { return pick(100) < pct; };
  int n = 2 + pick(std::max(1, max_components - 1));
  std::vector<GenComp> cs(n);
  for (int i = 0; i < n; ++i) {
    GenComp& c = cs[i];
    c.name = "Comp" + std::to_string(i);
    c.file = pick(2);
    c.object_params = chance(20);
    c.rest = !c.object_params && chance(15);
    c.relay = i > 0 && i + 1 < n && chance(40);
    int np = i == 0 ? pick(2) : 1 + pick(3);
    for (int k = 0; k < np; ++k) c.props.push_back("p" + std::to_string(k));
    int ns = pick(3);
    for (int k = 0; k < ns; ++k) c.states.push_back("s" + std::to_string(i) + "x" + std::to_string(k));
  }
  auto prop_ref = [&](const GenComp& c, const std::string& p) { return c.object_params ? "props." + p : p; };

  for (int i = 0; i < n; ++i) {
    GenComp& c = cs[i];
    // value sources this component can hand down
    std::vector<std::string> sources;
    for (const auto& s : c.states) {
      sources.push_back(s);
      sources.push_back(setter_of(s));
    }
    for (const auto& p : c.props) sources.push_back(prop_ref(c, p));
    // local reads, calls and effects
    for (const auto& s : c.states) {
      int mode = pick(4);
      if (mode == 1) c.jsx.push_back("<span>{" + s + "}</span>");
      if (chance(50)) {
        std::string call = setter_of(s) + "(" + std::to_string(pick(9)) + ")";
        if (chance(50)) {
          c.body.push_back("useEffect(() => {\n    " + call + ";\n  }, []);");
        } else {
          c.jsx.push_back("<button onClick={() => " + call + "}>go</button>");
        }
      }
    }
    for (const auto& p : c.props) {
      int mode = c.relay || chance(20) ? 0 : 1 + pick(3);
      if (mode == 1) c.jsx.push_back("<em>{" + prop_ref(c, p) + "}</em>");
      if (mode == 2) c.body.push_back("useEffect(() => {\n    " + prop_ref(c, p) + "(1);\n  }, []);");
      if (mode == 3) c.jsx.push_back("<button onClick={() => " + prop_ref(c, p) + "(2)}>call</button>");
    }
    // render sites
    int rendered = 0;
    for (int j = i + 1; j < n && rendered < 3; ++j) {
      // Adjacent edges are likely so that long forward chains show up.
      if (!chance(j == i + 1 ? (c.relay ? 100 : 85) : 40)) continue;
      ++rendered;
      const GenComp& child = cs[j];
      std::vector<std::string> attrs;
      std::vector<std::string> names = child.props;
      if (child.rest || child.object_params) names.push_back("extra" + std::to_string(pick(2)));
      for (const auto& name : names) {
        bool relayed = c.relay && j == i + 1 && !c.props.empty();
        if (!relayed && !chance(70)) continue;
        int kind = pick(6);
        std::string value;
        if (relayed) {
          bool same = std::find(c.props.begin(), c.props.end(), name) != c.props.end();
          value = "{" + prop_ref(c, same ? name : c.props[pick(static_cast<int>(c.props.size()))]) + "}";
        } else if (kind == 0 || sources.empty()) {
          value = "\"lit\"";
        } else if (kind == 1) {
          const std::string& src = sources[pick(static_cast<int>(sources.size()))];
          value = "{() => " + src + "(3)}";
        } else if (!c.states.empty() && chance(40)) {
          value = "{" + c.states[pick(static_cast<int>(c.states.size()))] + "}";
        } else if (!c.props.empty() && chance(50)) {
          value = "{" + prop_ref(c, c.props[pick(static_cast<int>(c.props.size()))]) + "}";
        } else {
          value = "{" + sources[pick(static_cast<int>(sources.size()))] + "}";
        }
        attrs.push_back(name + "=" + value);
      }
      if (c.rest && chance(60)) attrs.push_back("{...rest}");
      if (c.object_params && chance(30)) attrs.push_back("{...props}");
      std::string site = "<" + child.name;
      for (const auto& a : attrs) site += " " + a;
      site += " />";
      c.jsx.push_back(site);
    }
    if (c.jsx.empty()) c.jsx.push_back("text");
  }

  std::vector<std::string> files(2);
  std::vector<std::set<int>> imports(2);
  for (int i = 0; i < n; ++i) {
    const GenComp& c = cs[i];
    for (int j = i + 1; j < n; ++j) {
      if (cs[j].file != c.file) imports[c.file].insert(j);
    }
    std::string params;
    if (c.object_params) {
      params = "props";
    } else if (!c.props.empty() || c.rest) {
      params = "{ ";
      for (std::size_t k = 0; k < c.props.size(); ++k) params += (k ? ", " : "") + c.props[k];
      if (c.rest) params += std::string(c.props.empty() ? "" : ", ") + "...rest";
      params += " }";
    }
    std::string text;
    bool arrow = i % 2 == 1;
    text += arrow ? "export const " + c.name + " = (" + params + ") => {\n"
                  : "export function " + c.name + "(" + params + ") {\n";
    for (const auto& s : c.states) text += "  const [" + s + ", " + setter_of(s) + "] = useState(0);\n";
    for (const auto& b : c.body) text += "  " + b + "\n";
    text += "  return (\n    <div>\n";
    for (const auto& x : c.jsx) text += "      " + x + "\n";
    text += "    </div>\n  );\n}";
    text += arrow ? ";\n\n" : "\n\n";
    files[c.file] += text;
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (int f = 0; f < 2; ++f) {
    if (files[f].empty()) continue;
    std::string head = "import { useEffect, useState } from 'react';\n";
    for (int j : imports[f]) {
      head += "import { " + cs[j].name + " } from './File" + std::to_string(1 - f) + "';\n";
    }
    out.emplace_back("src/File" + std::to_string(f) + ".jsx", head + "\n" + files[f]);
  }
  return out;
}

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + HOOKLENS_BINARY + "\" " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path temp_dir(const std::string& tag) {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() / ("hooklens-" + tag + "-" + std::to_string(::getpid()) + "-" +
                                            std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace testkit
