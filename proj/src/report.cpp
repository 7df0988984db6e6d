#include "crtool/report.hpp"

#include <array>
#include <charconv>
#include <optional>
#include <sstream>

namespace crtool {

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), end);
}

namespace {

struct Cells {
  std::optional<double> eps;
  std::array<std::optional<double>, 4> params;
};

Cells family_cells(const FamilyDescriptor& f) {
  Cells c;
  switch (f.kind) {
    case FamilyKind::FlatTube:
    case FamilyKind::LogTube:
      c.eps = f.eps;
      break;
    case FamilyKind::Sphere:
      c.params[0] = f.radius;
      break;
    case FamilyKind::Ellipsoid:
      for (int i = 0; i < 4; ++i) c.params[i] = f.ell[i];
      break;
    case FamilyKind::CartanMu:
      c.params[0] = f.alpha;
      break;
  }
  return c;
}

// Column values for one record, in CSV order after the family name.
std::array<std::optional<double>, 16> record_cells(const Cells& fam,
                                                   const ScanRecord& r) {
  std::array<std::optional<double>, 16> v;
  v[0] = fam.eps;
  for (int i = 0; i < 4; ++i) v[1 + i] = fam.params[i];
  if (!r.point.param.empty()) v[5] = r.point.param[0];
  if (r.point.param.size() > 1) v[6] = r.point.param[1];
  v[7] = r.point.z.real();
  v[8] = r.point.z.imag();
  v[9] = r.point.w.real();
  v[10] = r.point.w.imag();
  v[11] = r.point.residual;
  if (r.flag != UmbilicFlag::Poisoned) {
    v[12] = r.levi;
    v[13] = r.det.real();
    v[14] = r.det.imag();
    v[15] = r.norm_resid;
  }
  return v;
}

constexpr const char* kColumns[] = {
    "family", "eps",  "param1",    "param2", "param3", "param4",
    "theta",  "phi",  "re_z",      "im_z",   "re_w",   "im_w",
    "rho_resid", "levi", "re_det", "im_det", "norm_resid", "flag"};

}  // namespace

std::string records_to_csv(const FamilyDescriptor& family,
                           const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  for (std::size_t i = 0; i < std::size(kColumns); ++i)
    os << (i ? "," : "") << kColumns[i];
  os << '\n';
  const Cells fam = family_cells(family);
  const std::string name = family.name();
  for (const auto& r : records) {
    os << name;
    for (const auto& cell : record_cells(fam, r))
      os << ',' << (cell ? format_double(*cell) : "");
    os << ',' << to_string(r.flag) << '\n';
  }
  return os.str();
}

std::string records_to_json(const FamilyDescriptor& family,
                            const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  const Cells fam = family_cells(family);
  const std::string name = family.name();
  os << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    os << "  {\"family\":\"" << name << '"';
    const auto cells = record_cells(fam, records[i]);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      os << ",\"" << kColumns[c + 1] << "\":";
      if (cells[c])
        os << format_double(*cells[c]);
      else
        os << "null";
    }
    os << ",\"flag\":\"" << to_string(records[i].flag) << "\"}";
    if (i + 1 < records.size()) os << ',';
    os << '\n';
  }
  os << "]\n";
  return os.str();
}

}  // namespace crtool
