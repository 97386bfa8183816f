#pragma once

namespace wds {

// Closed-form butterfly-operation counts per multicarrier symbol. SEFDM
// counts use the real-valued transform length Q/alpha without rounding.
double ops_ofdm(int q);
double ops_sefdm(int q, double alpha);
double ops_sefdm_pruned(int q, double alpha);

}  // namespace wds
