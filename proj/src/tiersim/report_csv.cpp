#include <ostream>

#include "tiertune/numfmt.hpp"
#include "tiertune/tiersim.hpp"

namespace tiertune::sim {

void write_report_csv_header(std::ostream& out) {
  out << "interval_index,fm_target,pacc_fast,pacc_slow,pm_de,pm_pr,mig_failures,direct_reclaims,"
         "exec_time\n";
}

void write_report_csv_row(std::ostream& out, const IntervalReport& r) {
  out << r.interval_index << ',' << r.fm_target << ',' << r.pacc_fast << ',' << r.pacc_slow << ','
      << r.pm_de << ',' << r.pm_pr << ',' << r.mig_failures << ',' << r.direct_reclaims << ','
      << format_double(r.exec_time) << '\n';
}

}  // namespace tiertune::sim
