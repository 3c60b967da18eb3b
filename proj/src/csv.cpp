#include "curvestep/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvestep {

std::string format_double(double x) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  double x = 0.0;
  const auto res = std::from_chars(b, e, x);  // handles nan/inf with sign
  if (res.ec != std::errc())
    throw std::runtime_error("parse_double: bad number '" + s + "'");
  return x;
}

namespace {

long parse_long(const std::string& s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc())
    throw std::runtime_error("csv: bad integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void write_run_csv(const RunRecord& rec, const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw IoError("csv: cannot open " + file.string());
  os << "# curvestep-run v1\n";
  os << "# dof " << rec.dof << "\n";
  os << "# decimation " << rec.decimation << "\n";
  os << "# force_evals " << rec.total_force_evaluations << "\n";
  os << "# accepted " << rec.accepted_steps << "\n";
  os << "# retried " << rec.retried_steps << "\n";
  os << "# rollbacks " << rec.rollbacks << "\n";
  os << "# final_time " << format_double(rec.final_time) << "\n";
  os << "# dt_min_used " << format_double(rec.dt_min_used) << "\n";
  os << "# dt_max_used " << format_double(rec.dt_max_used) << "\n";
  os << "# dtlog " << rec.dt_log_t.size() << "\n";
  for (std::size_t i = 0; i < rec.dt_log_t.size(); ++i)
    os << "# l " << format_double(rec.dt_log_t[i]) << " "
       << format_double(rec.dt_log_dt[i]) << "\n";
  os << "t,dt,k_eff";
  for (std::size_t j = 0; j < rec.dof; ++j) os << ",d" << j;
  for (std::size_t j = 0; j < rec.dof; ++j) os << ",v" << j;
  for (std::size_t j = 0; j < rec.dof; ++j) os << ",a" << j;
  os << "\n";
  for (std::size_t i = 0; i < rec.samples(); ++i) {
    os << format_double(rec.t[i]) << "," << format_double(rec.dt[i]) << ","
       << format_double(rec.k_eff[i]);
    const auto base = i * rec.dof;
    for (std::size_t j = 0; j < rec.dof; ++j) os << "," << format_double(rec.d[base + j]);
    for (std::size_t j = 0; j < rec.dof; ++j) os << "," << format_double(rec.v[base + j]);
    for (std::size_t j = 0; j < rec.dof; ++j) os << "," << format_double(rec.a[base + j]);
    os << "\n";
  }
  if (!os) throw IoError("csv: write failed for " + file.string());
}

RunRecord read_run_csv(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw IoError("csv: cannot open " + file.string());
  RunRecord rec;
  std::string line;
  bool header_seen = false;
  long dtlog_expected = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "curvestep-run") continue;
      std::string val;
      if (key == "l") {
        std::string a, b;
        ls >> a >> b;
        rec.dt_log_t.push_back(parse_double(a));
        rec.dt_log_dt.push_back(parse_double(b));
        continue;
      }
      ls >> val;
      if (key == "dof") rec.dof = static_cast<std::size_t>(parse_long(val));
      else if (key == "decimation") rec.decimation = static_cast<int>(parse_long(val));
      else if (key == "force_evals") rec.total_force_evaluations = parse_long(val);
      else if (key == "accepted") rec.accepted_steps = parse_long(val);
      else if (key == "retried") rec.retried_steps = parse_long(val);
      else if (key == "rollbacks") rec.rollbacks = parse_long(val);
      else if (key == "final_time") rec.final_time = parse_double(val);
      else if (key == "dt_min_used") rec.dt_min_used = parse_double(val);
      else if (key == "dt_max_used") rec.dt_max_used = parse_double(val);
      else if (key == "dtlog") dtlog_expected = parse_long(val);
      else throw std::runtime_error("csv: unknown metadata key '" + key + "'");
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 3 + 3 * rec.dof)
      throw std::runtime_error("csv: row has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(3 + 3 * rec.dof));
    rec.t.push_back(parse_double(cells[0]));
    rec.dt.push_back(parse_double(cells[1]));
    rec.k_eff.push_back(parse_double(cells[2]));
    for (std::size_t j = 0; j < rec.dof; ++j)
      rec.d.push_back(parse_double(cells[3 + j]));
    for (std::size_t j = 0; j < rec.dof; ++j)
      rec.v.push_back(parse_double(cells[3 + rec.dof + j]));
    for (std::size_t j = 0; j < rec.dof; ++j)
      rec.a.push_back(parse_double(cells[3 + 2 * rec.dof + j]));
  }
  if (rec.dof == 0 || !header_seen)
    throw std::runtime_error("csv: " + file.string() + " is not a run file");
  if (static_cast<long>(rec.dt_log_t.size()) != dtlog_expected)
    throw std::runtime_error("csv: dt log truncated in " + file.string());
  return rec;
}

void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw IoError("csv: cannot open " + file.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << row[i];
    os << "\n";
  }
  if (!os) throw IoError("csv: write failed for " + file.string());
}

}  // namespace curvestep
