#ifndef SLG_PARAMS_IO_HPP
#define SLG_PARAMS_IO_HPP

#include <string>
#include <vector>

#include "slg/models.hpp"

namespace slg {

// Line-oriented parameter files, one record per line:
//   slg1 sub NP alpha2 0.5
//   slg1 adj VP STOP 0.8
//   slg2 sub alpha1 1 alpha2 0.5
//   slg2 adj alpha1 2 beta 0.2
//   slg2 root alpha1 1.0
//   slg3 root alpha1 1.0
//   slg3 expand alpha1 {1>alpha2; 2>[beta]; 2.2>alpha3} 0.7
//   slg4 frag (S A! (B "b")) 0.25
// A file whose first record line is "lifted-slg3" carries slg2 records and
// loads as the level-3 lift of that model.
AnyParams parse_params(const std::string& text);
std::string render_params(const AnyParams& p);

AnyParams load_params_file(const std::string& path);
void save_params_file(const std::string& path, const AnyParams& p);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Probabilities are emitted with 12 significant digits.
std::string format_prob(double v);

// Single-record parser shared with the smoothed-model file format. The
// builder locks onto the level of the first record it sees.
class ParamsBuilder {
 public:
  void add_line(const std::string& line, int lineno);
  bool empty() const { return level_ == 0; }
  int level() const { return level_; }
  AnyParams take();

 private:
  int level_ = 0;
  Slg1Params l1_;
  Slg2Params l2_;
  Slg3Params l3_;
  Slg4Params l4_;
};

}  // namespace slg

#endif  // SLG_PARAMS_IO_HPP
