#pragma once

#include <string>
#include <vector>

#include "crtool/scanner.hpp"

namespace crtool {

/// Locale-independent decimal rendering with 17 significant digits (enough
/// to round-trip any double bit-exactly).
std::string format_double(double v);

/// Fixed column order:
/// family,eps,param1,param2,param3,param4,theta,phi,re_z,im_z,re_w,im_w,
/// rho_resid,levi,re_det,im_det,norm_resid,flag — unused columns empty,
/// '.' decimal separator and '\n' line endings on every platform.
std::string records_to_csv(const FamilyDescriptor& family,
                           const std::vector<ScanRecord>& records);

/// One JSON array; objects carry the CSV columns as keys, with null in the
/// cells CSV leaves empty. Numbers carry 17 significant digits.
std::string records_to_json(const FamilyDescriptor& family,
                            const std::vector<ScanRecord>& records);

}  // namespace crtool
