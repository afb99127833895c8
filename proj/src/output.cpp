#include "fadetrig/output.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fadetrig {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string path_csv(const SamplePath& path) {
  std::string out = "t,L,alpha,alpha_hat,est_error,U\n";
  for (const TracePoint& p : path.trace) {
    row(out, {format_real(p.t), format_real(p.l), format_real(p.alpha),
              format_real(p.alpha_hat), format_real(p.est_error), format_real(p.u)});
  }
  return out;
}

std::string events_csv(const SamplePath& path) {
  std::string out = "k,t_k,interval,r_k,u_post\n";
  for (const TransmissionRecord& r : path.transmissions) {
    row(out, {std::to_string(r.k), format_real(r.t_k), format_real(r.interval),
              std::to_string(r.r_k), format_real(r.u_post)});
  }
  return out;
}

std::string envelope_csv(const McSummary& s) {
  const Envelope& e = s.envelope;
  std::string out = "t,L_min,L_max,L_mean,alpha_min,alpha_max,alpha_mean\n";
  for (std::size_t i = 0; i < e.t.size(); ++i) {
    row(out, {format_real(e.t[i]), format_real(e.l_min[i]), format_real(e.l_max[i]),
              format_real(e.l_mean[i]), format_real(e.alpha_min[i]),
              format_real(e.alpha_max[i]), format_real(e.alpha_mean[i])});
  }
  return out;
}

std::string intervals_hist_csv(const McSummary& s) {
  std::string out = "bin_lo,bin_hi,fraction\n";
  for (int i = 0; i <= kHistBins; ++i) {
    const double lo = i * kHistWidth;
    const double hi = i < kHistBins ? (i + 1) * kHistWidth
                                    : std::numeric_limits<double>::infinity();
    row(out, {format_real(lo), format_real(hi), format_real(s.hist[i])});
  }
  return out;
}

std::string compare_csv(const std::vector<FormationRow>& rows) {
  std::string out = "alpha_d,scheme,min_interval,mean_interval,err_L,err_alpha\n";
  for (const FormationRow& r : rows) {
    row(out, {format_real(rad_to_deg(r.alpha_d)), scheme_name(r.scheme),
              format_real(r.min_interval), format_real(r.mean_interval),
              format_real(r.err_l), format_real(r.err_alpha)});
  }
  return out;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + file.parent_path().string() +
                             ": " + ec.message());
  }
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  os.close();
  if (!os) throw std::runtime_error("write failed: " + file.string());
}

std::vector<std::filesystem::path> emit_outputs(const McSummary& summary,
                                                const std::vector<SamplePath>& paths,
                                                const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> files;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto f = out_dir / name;
    write_text_file(f, content);
    files.push_back(f);
  };
  for (const SamplePath& p : paths) {
    put("path_" + std::to_string(p.seed) + ".csv", path_csv(p));
    put("events_" + std::to_string(p.seed) + ".csv", events_csv(p));
  }
  put("envelope.csv", envelope_csv(summary));
  put("intervals_hist.csv", intervals_hist_csv(summary));
  return files;
}

}  // namespace fadetrig
