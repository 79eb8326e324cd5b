#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "configuration.hpp"

namespace gather {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
  std::size_t line;
};

// Line format: '#' starts a comment, "M x y" adds a meeting node, "R x y"
// adds one robot (repeat the line for a multiplicity).
inline Configuration parse_scenario(std::istream& in) {
  std::vector<Node> meeting;
  RobotMap robots;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "M" && tag != "R") throw ParseError(lineno, "expected 'M' or 'R', got '" + tag + "'");
    long long x, y;
    if (!(ls >> x >> y)) throw ParseError(lineno, "expected two integer coordinates");
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "unexpected trailing text '" + extra + "'");
    Node p{x, y};
    if (tag == "M") {
      if (std::find(meeting.begin(), meeting.end(), p) != meeting.end())
        throw ParseError(lineno, "duplicate meeting node " + to_string(p));
      meeting.push_back(p);
    } else {
      ++robots[p];
    }
  }
  if (meeting.empty()) throw ParseError(lineno, "no meeting nodes");
  if (robots.empty()) throw ParseError(lineno, "no robots");
  return Configuration(std::move(meeting), std::move(robots));
}

inline Configuration parse_scenario(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline Configuration load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_scenario(in);
}

inline std::string render_scenario(const Configuration& c, const std::string& comment = {}) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << '\n';
  for (auto& m : c.meeting_nodes()) out << "M " << m.x << ' ' << m.y << '\n';
  for (auto& [p, k] : c.robots())
    for (std::int64_t i = 0; i < k; ++i) out << "R " << p.x << ' ' << p.y << '\n';
  return out.str();
}

}  // namespace gather
