#ifndef CHOQUARD_VERSION_HPP
#define CHOQUARD_VERSION_HPP

#define CHOQUARD_VERSION "0.1.0"

#endif
