#ifndef SPINCHAIN_IO_HPP
#define SPINCHAIN_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spinchain/chain_model.hpp"
#include "spinchain/evolution.hpp"
#include "spinchain/imperfections.hpp"
#include "spinchain/protocol.hpp"

namespace spinchain {

std::string to_json(const ChainSpec& spec);
ChainSpec chain_spec_from_json(const std::string& text);

std::string to_json(const DisorderEnsemble& ens);
DisorderEnsemble ensemble_from_json(const std::string& text);

std::string to_json(const ProtocolOutcome& outcome,
                    const MeasurementSchedule& schedule);

// CSV helpers. Headers are fixed; numbers use a stable %.12g format so
// regenerating with identical flags is byte-identical.
void write_csv_row(std::ostream& os, const std::vector<double>& values);

struct AmplitudeSeries {
  std::vector<double> t;
  std::vector<Complex> f;
};

void write_amplitude_csv(std::ostream& os, const AmplitudeSeries& series);

std::string format_double(double v);

}  // namespace spinchain

#endif
