#ifndef MIDHYP_MIDHYP_HPP
#define MIDHYP_MIDHYP_HPP

#include "arrangement.hpp"
#include "charpoly.hpp"
#include "common.hpp"
#include "ffcount.hpp"
#include "golden.hpp"
#include "oracle.hpp"
#include "ranking.hpp"
#include "record.hpp"
#include "spherical.hpp"

#endif // MIDHYP_MIDHYP_HPP
