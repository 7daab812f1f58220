#include "swarmrl/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "swarmrl/errors.hpp"

namespace swarmrl {
namespace {

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out.push_back(',');
    out += c;
    first = false;
  }
  out.push_back('\n');
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    cells.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

double parse_double(std::string_view cell, std::size_t line_no) {
  if (cell == "nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError("line " + std::to_string(line_no) + ": '" + std::string(cell) +
                  "' is not a number");
  }
  return x;
}

std::uint64_t parse_step(std::string_view cell, std::size_t line_no) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw IoError("line " + std::to_string(line_no) + ": '" + std::string(cell) +
                  "' is not a step index");
  }
  return x;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

std::string aggregate_csv(const AggregateSeries& series) {
  std::string out(kAggregateHeader);
  out.push_back('\n');
  for (const AggregatePoint& p : series.points) {
    append_row(out, {std::to_string(p.step), format_number(p.time), format_number(p.mean_value),
                     format_number(p.var_value), format_number(p.mean_sampled_reward),
                     format_number(p.frac_seeds_optimal), format_number(p.mean_mass_optimal),
                     format_number(p.var_mass_optimal)});
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  const bool dump_members = !traj.points.empty() && !traj.points.front().members.empty();
  std::string out = "step,time,value,sampled_reward,mass_optimal,argmax_optimal";
  const char* prefix = traj.state_is_counts ? ",count" : ",p";
  for (std::size_t a = 0; a < traj.n_states; ++a) out += prefix + std::to_string(a);
  if (dump_members) out += ",members";
  out.push_back('\n');
  for (const TrajectoryPoint& p : traj.points) {
    out += std::to_string(p.step);
    for (double x : {p.time, p.value, p.sampled_reward, p.mass_optimal}) {
      out.push_back(',');
      out += format_number(x);
    }
    out += p.argmax_optimal ? ",1" : ",0";
    for (double x : p.state) {
      out.push_back(',');
      out += format_number(x);
    }
    if (dump_members) {
      out.push_back(',');
      for (std::size_t i = 0; i < p.members.size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(p.members[i]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string q_table_csv(const BanditEnv& env, const QTable& q) {
  std::string out = "arm,latent_mean,q\n";
  for (std::size_t a = 0; a < q.size(); ++a) {
    append_row(out, {std::to_string(a), format_number(env.latent_means()[a]), format_number(q[a])});
  }
  return out;
}

AggregateSeries parse_aggregate_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: missing header");
  if (line != kAggregateHeader) throw IoError("unexpected CSV header '" + line + "'");
  AggregateSeries series;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 8) {
      throw IoError("line " + std::to_string(line_no) + ": expected 8 columns, got " +
                    std::to_string(cells.size()));
    }
    AggregatePoint p;
    p.step = parse_step(cells[0], line_no);
    p.time = parse_double(cells[1], line_no);
    p.mean_value = parse_double(cells[2], line_no);
    p.var_value = parse_double(cells[3], line_no);
    p.mean_sampled_reward = parse_double(cells[4], line_no);
    p.frac_seeds_optimal = parse_double(cells[5], line_no);
    p.mean_mass_optimal = parse_double(cells[6], line_no);
    p.var_mass_optimal = parse_double(cells[7], line_no);
    series.points.push_back(p);
  }
  return series;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory for '" + path.string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_csv(const AggregateSeries& series, const std::filesystem::path& path) {
  write_text(path, aggregate_csv(series));
}

void write_csv(const Trajectory& traj, const std::filesystem::path& path) {
  write_text(path, trajectory_csv(traj));
}

AggregateSeries read_aggregate_csv(const std::filesystem::path& path) {
  try {
    return parse_aggregate_csv(read_text(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace swarmrl
