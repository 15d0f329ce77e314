#include "ddc/types.hpp"
